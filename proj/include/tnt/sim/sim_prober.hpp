#pragma once

#include "tnt/prober.hpp"
#include "tnt/sim/network.hpp"

namespace tnt::sim {

class SimProber : public Prober {
public:
    explicit SimProber(const Network& net) : net_(net) {}

    ProbeReply trace_probe(Ipv4 target, int ttl, std::uint16_t flow_id) override;
    ProbeReply echo(Ipv4 target) override;
    ProbeReply udp(Ipv4 target) override;
    long probes_emitted() const override { return emitted_; }

    static constexpr double kLinkRttMs = 0.5;

private:
    ProbeReply send(SimPacket p);

    const Network& net_;
    long emitted_ = 0;
};

}  // namespace tnt::sim
