#pragma once

#include <cstdint>

#include "tnt/model.hpp"
#include "tnt/prober.hpp"
#include "tnt/revelation.hpp"

namespace tnt {

struct EngineConfig {
    int starting_ttl = 3;
    int max_ttl = 32;
    int gap_limit = 5;
    Thresholds thresholds;
    bool brute_force = false;
    bool suppress_consecutive = true;
    int iteration_cap = 16;
};

AnnotatedTrace trace_naughty_tunnel(Ipv4 target, const EngineConfig& cfg, Prober& prober, std::uint16_t flow_id = 33434);

// Whether the hop at index i passes the two-hop cumulated UTURN rule.
bool uturn_confirmed(const std::vector<TraceHop>& hops, std::size_t i, const Thresholds& t);

// Indicator or trigger code of hop i before consecutive-trigger suppression.
Code classify_hop(const std::vector<TraceHop>& hops, std::size_t i, const Thresholds& t);

}  // namespace tnt
