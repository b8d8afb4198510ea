#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnt/model.hpp"
#include "tnt/sim/scenario.hpp"

namespace tnt::sim {

enum class PacketKind { Udp, EchoRequest, Reply };

struct SimPacket {
    Ipv4 src;
    Ipv4 dst;
    int ip_ttl = 64;
    std::vector<LabelStackEntry> stack;  // front() is the top entry
    PacketKind kind = PacketKind::Udp;
    std::uint16_t flow = 0;
    bool vrf = false;

    ReplyKind reply_kind = ReplyKind::None;
    int quoted_ttl = 0;
    std::vector<LabelStackEntry> quoted_stack;
    int responder = -1;
    int links = 0;
};

struct Emission {
    SimPacket packet;
    int router = -1;
    int out_iface = -1;  // -1: generated locally and routed by `router`
};

struct StepResult {
    enum Kind { Forward, Expire, Deliver, Drop } kind = Drop;
    int out_iface = -1;
    std::optional<Emission> reply;
    std::string diagnostic;
};

struct Iface {
    Ipv4 addr;
    int link = -1;
    int peer = -1;
    int peer_iface = -1;
    bool vrf = false;
};

// Outgoing IP-TTL when a penultimate hop pops the last label.
int php_pop_ttl(Os os, bool local_propagate, int ip_ttl, int lse_ttl_after_decrement);

class Network {
public:
    explicit Network(Topology topo);

    const Topology& topology() const { return topo_; }
    const std::vector<Iface>& ifaces(int router) const { return ifaces_[router]; }
    std::optional<int> owner(Ipv4 addr) const;
    Ipv4 vantage_address() const;
    int vantage() const { return vantage_; }

    StepResult step(int router, SimPacket& p, int in_iface, bool local) const;

    struct Arrival {
        bool delivered = false;
        int router = -1;
        SimPacket packet;
        std::optional<Emission> reply;
    };
    Arrival walk(const Emission& e) const;

    struct VpReply {
        bool got = false;
        SimPacket packet;
    };
    // Sends p from the vantage point and returns whatever reply comes back to it.
    VpReply exchange(SimPacket p) const;

    std::optional<std::uint32_t> local_label(int router, const Prefix& fec) const;

private:
    enum class FecKind { Loopback, Link, External, Te };
    struct Fec {
        Prefix prefix;
        FecKind kind = FecKind::Loopback;
        std::vector<int> egresses;
        int head = -1;
    };
    struct LfibEntry {
        enum Kind { Swap, PopPhp, PopUntagged } kind = Swap;
        std::uint32_t out = 0;
        int iface = -1;
        int fec = -1;
    };
    struct Push {
        std::vector<std::uint32_t> labels;
        int iface = -1;
    };

    Topology topo_;
    int vantage_ = -1;
    std::vector<std::vector<Iface>> ifaces_;
    std::map<Ipv4, int> owner_;
    std::vector<std::vector<int>> dist_;
    std::vector<Fec> fecs_;
    std::map<Prefix, int> ldp_fec_;
    std::map<int, int> external_fec_;
    std::map<std::pair<int, int>, int> te_fec_;
    std::vector<std::map<int, std::uint32_t>> local_;
    std::vector<std::map<std::uint32_t, LfibEntry>> lfib_;

    void build_ifaces();
    void build_distances();
    void build_fecs();
    void build_lfib();

    bool ldp_on(int r) const;
    bool is_local(int r, Ipv4 addr) const;
    std::optional<int> next_iface(int r, int dest_router) const;
    std::optional<int> route_iface(int r, Ipv4 dst) const;
    int fec_egress(int fec, int r) const;
    std::uint32_t advertised(int egress, int fec) const;
    std::optional<Push> push_for(int r, Ipv4 dst, bool vrf) const;

    StepResult ip_part(int r, SimPacket& p, int in, bool local, bool skip_dec, std::optional<Ipv4> src_override,
                       const std::vector<LabelStackEntry>& quote) const;
    StepResult deliver(int r, SimPacket& p, int in, std::optional<Ipv4> src_override) const;
    StepResult expire(int r, const SimPacket& p, Ipv4 src, int qttl, std::vector<LabelStackEntry> quote,
                      std::optional<Emission> tunnelled = std::nullopt) const;
    StepResult vpn_part(int r, SimPacket& p, int in, const std::vector<LabelStackEntry>& received) const;
    std::vector<LabelStackEntry> quote_of(int r, const std::vector<LabelStackEntry>& received) const;
};

}  // namespace tnt::sim
