#pragma once

#include <string>

#include "tnt/sim/scenario.hpp"

namespace tnt::sim {

// VP - CE1 - PE1 - P1..Pn - PE2 - CE2 - CE3, target on CE3's loopback.
struct ChainSpec {
    std::string os = "cisco-15.2";
    int lsrs = 3;
    bool mpls = true;
    bool propagate = true;
    bool uhp = false;
    bool rfc4950 = true;
    bool icmp_tunneling = false;
    bool next_hop_self = true;
    bool rsvp_te = false;
};

inline const Ipv4 kChainTarget{10, 254, 0, 1};

std::string chain_scenario_text(const ChainSpec& spec);
Topology make_chain(const ChainSpec& spec);

// Probe TTL at which the i-th P router (1-based) answers.
inline int chain_lsr_ttl(int i) { return 2 + i; }

}  // namespace tnt::sim
