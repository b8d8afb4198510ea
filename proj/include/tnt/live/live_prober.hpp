#pragma once

#include <chrono>
#include <cstdint>
#include <functional>

#include "tnt/live/wire.hpp"
#include "tnt/prober.hpp"

namespace tnt::live {

struct LiveOptions {
    std::chrono::milliseconds timeout{2000};
    int retries = 2;
    std::chrono::milliseconds spacing{20};
    std::uint16_t echo_ident = 0;  // 0: derived from the process id
};

// Raw-socket prober. Needs CAP_NET_RAW; the constructor throws ProbeFailure otherwise.
// Base-trace probes are TTL-limited echo requests whose identifier is the flow id and whose
// checksum is held constant, so per-flow load balancers keep them on one path.
class LiveProber : public Prober {
public:
    explicit LiveProber(LiveOptions opts = {});
    ~LiveProber() override;
    LiveProber(const LiveProber&) = delete;
    LiveProber& operator=(const LiveProber&) = delete;

    ProbeReply trace_probe(Ipv4 target, int ttl, std::uint16_t flow_id) override;
    ProbeReply echo(Ipv4 target) override;
    ProbeReply udp(Ipv4 target) override;
    long probes_emitted() const override { return emitted_; }

private:
    using Clock = std::chrono::steady_clock;
    using Match = std::function<bool(const IcmpReply&)>;

    void pace();
    void send_icmp(Ipv4 target, int ttl, const std::vector<std::uint8_t>& body);
    void send_raw(Ipv4 target, const std::vector<std::uint8_t>& datagram);
    ProbeReply await(const Match& match, Clock::time_point sent);
    Ipv4 source_for(Ipv4 target) const;

    LiveOptions opts_;
    int send_fd_ = -1;
    int icmp_fd_ = -1;
    std::uint16_t next_tag_ = 1;
    long emitted_ = 0;
    Clock::time_point last_send_{};
};

}  // namespace tnt::live
