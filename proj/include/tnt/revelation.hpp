#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnt/model.hpp"
#include "tnt/prober.hpp"

namespace tnt {

enum class ProbePurpose { Original, Revelation, Ping, Buddy };

// Probe session: wraps a prober with per-trace accounting and a ping cache.
class Session {
public:
    Session(Prober& prober, std::uint16_t flow_id) : prober_(prober), flow_id_(flow_id) {}

    HopRecord trace_hop(Ipv4 target, int ttl, ProbePurpose purpose);
    std::optional<int> ping(Ipv4 address);
    std::optional<Ipv4> udp_source(Ipv4 target);

    ProbeCounts& counts() { return counts_; }
    const ProbeCounts& counts() const { return counts_; }
    std::uint16_t flow_id() const { return flow_id_; }

private:
    // Attributes every probe the prober emitted since `before`, retries included.
    void charge(ProbePurpose purpose, long before);

    Prober& prober_;
    std::uint16_t flow_id_;
    ProbeCounts counts_;
    std::map<Ipv4, std::optional<int>> ping_cache_;
};

struct RevealConfig {
    int max_ttl = 32;
    int gap_limit = 5;
    int iteration_cap = 16;
};

struct RevelationResult {
    RevealState state = RevealState::NotAttempted;
    std::vector<RevealedHop> revealed;
    long probes = 0;
    std::string diagnostic;
};

RevelationResult reveal_tunnel(const HopRecord& ingress, const HopRecord& egress, Code code, Session& session,
                               const RevealConfig& cfg = {});

std::optional<Ipv4> buddy(Ipv4 address, Session& session);
std::optional<Ipv4> udp_incoming_interface_probe(Ipv4 target, Session& session);

}  // namespace tnt
