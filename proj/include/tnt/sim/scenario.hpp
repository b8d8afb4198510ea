#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tnt/ipv4.hpp"

namespace tnt::sim {

inline constexpr int kScenarioVersion = 1;
inline const Prefix kExternalFecKey{Ipv4(0), 0};

enum class Os { Cisco124, Cisco152, JunosOlive, JunosVmx, PlainIp, Host };
enum class Popping { Php, Uhp };
enum class LdpBinding { None, AllPrefixes, LoopbackOnly, HostRoutes, AclFiltered };
enum class Signalling { Ldp, RsvpTe };

bool is_cisco(Os os);
bool is_junos(Os os);

struct RouterModel {
    std::string name;
    Os os = Os::PlainIp;
    int te_initial = 255;
    int er_initial = 255;
    std::vector<Ipv4> loopbacks;

    bool mpls = false;
    bool propagate = true;
    Popping popping = Popping::Php;
    LdpBinding ldp = LdpBinding::AllPrefixes;
    std::vector<Prefix> explicit_null_for;
    bool icmp_tunneling = false;
    bool rfc4950 = true;
    bool next_hop_self = true;
    std::vector<std::string> rsvp_tunnels;
    std::map<Prefix, std::uint32_t> labels;
    std::uint32_t label_base = 16;
    std::optional<std::uint32_t> vpn_label;

    bool icmp = true;
    bool echo = true;
    int return_extra = 0;
};

struct Link {
    int a = -1;
    int b = -1;
    Ipv4 addr_a;
    Ipv4 addr_b;
    int prefix_len = 30;
    bool igp = false;
    std::string vrf;

    Prefix prefix() const { return Prefix::of(addr_a, prefix_len); }
};

struct Topology {
    std::string name;
    std::vector<RouterModel> routers;
    std::vector<Link> links;
    std::map<Ipv4, std::string> hostnames;
    std::optional<Ipv4> target;
    std::string vantage = "VP";
    std::string dialect = "tnt";
    Signalling signalling = Signalling::Ldp;
    std::map<std::string, int> engine;
    std::vector<std::string> expect_classes;

    int find(std::string_view router) const;
    int vantage_index() const;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses scenario text. Relative includes resolve against base_dir.
Topology load_topology(std::string_view text, const std::filesystem::path& base_dir = {});
Topology load_scenario_file(const std::filesystem::path& file);

std::optional<Os> os_from_string(std::string_view s);
std::string_view to_string(Os os);

}  // namespace tnt::sim
