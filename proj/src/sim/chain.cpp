#include "tnt/sim/chain.hpp"

#include <fmt/format.h>

namespace tnt::sim {

std::string chain_scenario_text(const ChainSpec& spec) {
    if (spec.lsrs < 0 || spec.lsrs > 200) throw ScenarioError("chain length out of range");
    const bool junos = spec.os.rfind("junos", 0) == 0;
    std::string s = "tnt-scenario 1\n";
    s += fmt::format("scenario chain-{}-{}\n", spec.os, spec.lsrs);
    s += fmt::format("target {}\n", kChainTarget.str());
    if (spec.rsvp_te) s += "signalling rsvp-te\n";
    s += "vantage VP\nrouter VP\n  os host\n";

    std::vector<std::string> core{"PE1"};
    for (int i = 1; i <= spec.lsrs; ++i) core.push_back(fmt::format("P{}", i));
    core.push_back("PE2");

    s += fmt::format("router CE1\n  os {}\n", spec.os);
    for (std::size_t i = 0; i < core.size(); ++i) {
        s += fmt::format("router {}\n  os {}\n  loopback 10.255.{}.{}\n", core[i], spec.os, i / 250, i % 250 + 1);
        if (!spec.mpls) continue;
        s += "  mpls on\n";
        if (!spec.propagate) s += "  propagate off\n";
        if (spec.uhp) s += "  popping uhp\n";
        if (!spec.rfc4950) s += "  rfc4950 off\n";
        if (spec.icmp_tunneling) s += "  icmp-tunneling on\n";
        if (spec.rsvp_te && junos) s += "  ldp none\n";
        if (spec.rsvp_te && i == 0) s += "  rsvp-tunnel PE2\n";
        if (spec.rsvp_te && i + 1 == core.size()) s += "  rsvp-tunnel PE1\n";
        if (!spec.next_hop_self && i + 1 == core.size()) s += "  next-hop-self off\n";
    }
    s += fmt::format("router CE2\n  os {}\nrouter CE3\n  os {}\n  loopback {}\n", spec.os, spec.os, kChainTarget.str());

    s += "link VP 10.200.0.1 CE1 10.200.0.2/30\n";
    s += "link CE1 10.200.1.1 PE1 10.200.1.2/30\n";
    for (std::size_t i = 0; i + 1 < core.size(); ++i)
        s += fmt::format("link {} 10.{}.{}.1 {} 10.{}.{}.2/30\n", core[i], 100 + i / 250, i % 250, core[i + 1],
                         100 + i / 250, i % 250);
    s += "link PE2 10.201.0.1 CE2 10.201.0.2/30\n";
    s += "link CE2 10.201.1.1 CE3 10.201.1.2/30\n";
    return s;
}

Topology make_chain(const ChainSpec& spec) { return load_topology(chain_scenario_text(spec)); }

}  // namespace tnt::sim
