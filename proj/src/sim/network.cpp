#include "tnt/sim/network.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace tnt::sim {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 2;
constexpr int kWalkLimit = 1024;
// LSE-TTLs above this were pushed at 255 by a non-propagating ingress.
constexpr int kPropagatedLseCeiling = 236;

StepResult forward(int iface) {
    StepResult s;
    s.kind = StepResult::Forward;
    s.out_iface = iface;
    return s;
}

StepResult drop(std::string why) {
    StepResult s;
    s.kind = StepResult::Drop;
    s.diagnostic = std::move(why);
    return s;
}

}  // namespace

int php_pop_ttl(Os os, bool local_propagate, int ip_ttl, int lse_ttl_after_decrement) {
    if (os == Os::JunosOlive) return local_propagate ? lse_ttl_after_decrement : ip_ttl;
    return std::min(ip_ttl, lse_ttl_after_decrement);
}

Network::Network(Topology topo) : topo_(std::move(topo)) {
    vantage_ = topo_.vantage_index();
    if (vantage_ < 0) throw ScenarioError("vantage router '" + topo_.vantage + "' not declared");
    build_ifaces();
    if (ifaces_[vantage_].empty()) throw ScenarioError("vantage point has no link");
    build_distances();
    build_fecs();
    build_lfib();
}

void Network::build_ifaces() {
    ifaces_.assign(topo_.routers.size(), {});
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const Link& l = topo_.links[li];
        int ia = int(ifaces_[l.a].size());
        int ib = int(ifaces_[l.b].size());
        ifaces_[l.a].push_back(Iface{l.addr_a, int(li), l.b, ib, !l.vrf.empty()});
        ifaces_[l.b].push_back(Iface{l.addr_b, int(li), l.a, ia, !l.vrf.empty()});
        owner_[l.addr_a] = l.a;
        owner_[l.addr_b] = l.b;
    }
    for (std::size_t r = 0; r < topo_.routers.size(); ++r)
        for (auto lo : topo_.routers[r].loopbacks) owner_[lo] = int(r);
}

void Network::build_distances() {
    std::size_t n = topo_.routers.size();
    dist_.assign(n, std::vector<int>(n, kUnreachable));
    for (std::size_t src = 0; src < n; ++src) {
        std::deque<int> q{int(src)};
        dist_[src][src] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (auto& f : ifaces_[u]) {
                if (dist_[src][f.peer] == kUnreachable) {
                    dist_[src][f.peer] = dist_[src][u] + 1;
                    q.push_back(f.peer);
                }
            }
        }
    }
}

bool Network::ldp_on(int r) const {
    const auto& R = topo_.routers[r];
    return R.mpls && R.ldp != LdpBinding::None;
}

bool Network::is_local(int r, Ipv4 addr) const {
    auto it = owner_.find(addr);
    return it != owner_.end() && it->second == r;
}

std::optional<int> Network::owner(Ipv4 addr) const {
    auto it = owner_.find(addr);
    if (it == owner_.end()) return std::nullopt;
    return it->second;
}

Ipv4 Network::vantage_address() const { return ifaces_[vantage_].front().addr; }

std::optional<int> Network::next_iface(int r, int dest) const {
    if (r == dest || dist_[r][dest] >= kUnreachable) return std::nullopt;
    for (std::size_t i = 0; i < ifaces_[r].size(); ++i)
        if (dist_[ifaces_[r][i].peer][dest] == dist_[r][dest] - 1) return int(i);
    return std::nullopt;
}

std::optional<int> Network::route_iface(int r, Ipv4 dst) const {
    auto o = owner(dst);
    if (!o) return std::nullopt;
    return next_iface(r, *o);
}

int Network::fec_egress(int fec, int r) const {
    const Fec& f = fecs_[fec];
    int best = f.egresses.front();
    for (int x : f.egresses)
        if (dist_[r][x] < dist_[r][best]) best = x;
    return best;
}

void Network::build_fecs() {
    auto binds_links = [&](int r) {
        auto m = topo_.routers[r].ldp;
        return ldp_on(r) && (m == LdpBinding::AllPrefixes || m == LdpBinding::AclFiltered);
    };
    for (std::size_t r = 0; r < topo_.routers.size(); ++r) {
        if (!ldp_on(int(r))) continue;
        for (auto lo : topo_.routers[r].loopbacks) {
            ldp_fec_[Prefix{lo, 32}] = int(fecs_.size());
            fecs_.push_back(Fec{Prefix{lo, 32}, FecKind::Loopback, {int(r)}, -1});
        }
    }
    for (const Link& l : topo_.links) {
        bool internal = topo_.routers[l.a].mpls && topo_.routers[l.b].mpls;
        if (!internal && !l.igp) continue;
        Fec f{l.prefix(), FecKind::Link, {}, -1};
        for (int end : {l.a, l.b})
            if (binds_links(end)) f.egresses.push_back(end);
        if (f.egresses.empty()) continue;
        ldp_fec_[f.prefix] = int(fecs_.size());
        fecs_.push_back(f);
    }
    for (std::size_t r = 0; r < topo_.routers.size(); ++r) {
        if (!ldp_on(int(r)) || topo_.routers[r].next_hop_self) continue;
        external_fec_[int(r)] = int(fecs_.size());
        fecs_.push_back(Fec{kExternalFecKey, FecKind::External, {int(r)}, -1});
    }
    if (topo_.signalling == Signalling::RsvpTe) {
        for (std::size_t h = 0; h < topo_.routers.size(); ++h) {
            for (auto& tail_name : topo_.routers[h].rsvp_tunnels) {
                int t = topo_.find(tail_name);
                const auto& T = topo_.routers[t];
                if (T.loopbacks.empty()) throw ScenarioError("rsvp tail '" + tail_name + "' has no loopback");
                te_fec_[{int(h), t}] = int(fecs_.size());
                fecs_.push_back(Fec{Prefix{T.loopbacks.front(), 32}, FecKind::Te, {t}, int(h)});
            }
        }
    }

    std::vector<std::set<std::uint32_t>> reserved(topo_.routers.size());
    std::vector<std::uint32_t> counter(topo_.routers.size());
    for (std::size_t r = 0; r < topo_.routers.size(); ++r) {
        counter[r] = topo_.routers[r].label_base;
        for (auto& [pfx, v] : topo_.routers[r].labels) reserved[r].insert(v);
        if (topo_.routers[r].vpn_label) reserved[r].insert(*topo_.routers[r].vpn_label);
    }
    auto allocate = [&](int r, const Fec& f) {
        const auto& R = topo_.routers[r];
        if (f.kind != FecKind::Te) {
            auto it = R.labels.find(f.prefix);
            if (it != R.labels.end()) return it->second;
        }
        while (reserved[r].count(counter[r])) ++counter[r];
        return counter[r]++;
    };
    local_.assign(topo_.routers.size(), {});
    for (std::size_t fi = 0; fi < fecs_.size(); ++fi) {
        const Fec& f = fecs_[fi];
        if (f.kind == FecKind::External) {
            local_[f.egresses.front()][int(fi)] = allocate(f.egresses.front(), f);
        }
        if (f.kind == FecKind::Te) {
            int tail = f.egresses.front();
            int r = f.head;
            bool ok = true;
            std::vector<int> transit;
            while (r != tail) {
                auto i = next_iface(r, tail);
                if (!i) {
                    ok = false;
                    break;
                }
                r = ifaces_[r][*i].peer;
                if (!topo_.routers[r].mpls) {
                    ok = false;
                    break;
                }
                if (r != tail) transit.push_back(r);
            }
            if (!ok) throw ScenarioError("rsvp tunnel crosses a non-MPLS router");
            for (int t : transit) local_[t][int(fi)] = allocate(t, f);
            continue;
        }
        for (std::size_t r = 0; r < topo_.routers.size(); ++r) {
            int ri = int(r);
            if (!ldp_on(ri) || std::count(f.egresses.begin(), f.egresses.end(), ri)) continue;
            int x = fec_egress(int(fi), ri);
            int cur = ri;
            bool ok = true;
            while (cur != x) {
                auto i = next_iface(cur, x);
                if (!i) {
                    ok = false;
                    break;
                }
                cur = ifaces_[cur][*i].peer;
                if (!ldp_on(cur)) {
                    ok = false;
                    break;
                }
            }
            if (ok) local_[ri][int(fi)] = allocate(ri, f);
        }
    }
}

std::uint32_t Network::advertised(int egress, int fec) const {
    const Fec& f = fecs_[fec];
    const auto& X = topo_.routers[egress];
    if (f.kind == FecKind::External) return local_[egress].at(fec);
    if (X.popping == Popping::Uhp) return kExplicitNullV4;
    if (f.kind != FecKind::Te && X.ldp == LdpBinding::AclFiltered)
        for (auto& acl : X.explicit_null_for)
            if (acl.contains(f.prefix.network) && f.prefix.length >= acl.length) return kExplicitNullV4;
    return kImplicitNull;
}

void Network::build_lfib() {
    lfib_.assign(topo_.routers.size(), {});
    for (std::size_t r = 0; r < topo_.routers.size(); ++r) {
        for (auto& [fi, label] : local_[r]) {
            const Fec& f = fecs_[fi];
            LfibEntry e;
            e.fec = fi;
            int ri = int(r);
            int x = f.kind == FecKind::Te ? f.egresses.front() : fec_egress(fi, ri);
            if (x == ri) {
                e.kind = LfibEntry::PopUntagged;
            } else {
                e.iface = *next_iface(ri, x);
                int n = ifaces_[r][e.iface].peer;
                if (n == x) {
                    std::uint32_t adv = advertised(x, fi);
                    if (adv == kImplicitNull) {
                        e.kind = LfibEntry::PopPhp;
                    } else {
                        e.kind = LfibEntry::Swap;
                        e.out = adv;
                    }
                } else {
                    e.kind = LfibEntry::Swap;
                    e.out = local_[n].at(fi);
                }
            }
            if (!lfib_[r].emplace(label, e).second)
                throw ScenarioError("label " + std::to_string(label) + " allocated twice on " + topo_.routers[r].name);
        }
    }
}

std::optional<std::uint32_t> Network::local_label(int router, const Prefix& fec) const {
    auto it = ldp_fec_.find(fec);
    int fi = -1;
    if (it != ldp_fec_.end()) {
        fi = it->second;
    } else if (fec == kExternalFecKey) {
        auto e = external_fec_.find(router);
        if (e != external_fec_.end()) fi = e->second;
    }
    if (fi < 0) return std::nullopt;
    auto l = local_[router].find(fi);
    if (l == local_[router].end()) return std::nullopt;
    return l->second;
}

std::optional<Network::Push> Network::push_for(int r, Ipv4 dst, bool vrf) const {
    const auto& R = topo_.routers[r];
    if (!R.mpls) return std::nullopt;
    auto o = owner(dst);
    if (!o || *o == r) return std::nullopt;

    std::vector<int> path{r};
    while (path.back() != *o) {
        auto i = next_iface(path.back(), *o);
        if (!i) return std::nullopt;
        path.push_back(ifaces_[path.back()][*i].peer);
    }
    std::size_t k = 0;
    while (k + 1 < path.size() && topo_.routers[path[k + 1]].mpls) ++k;
    int e = path[k];

    int fec = -1;
    std::optional<std::uint32_t> vpn;
    auto transport = [&](int exit) {
        if (topo_.signalling == Signalling::RsvpTe) {
            auto t = te_fec_.find({r, exit});
            if (t != te_fec_.end()) return t->second;
        }
        const auto& E = topo_.routers[exit];
        if (E.loopbacks.empty()) return -1;
        auto it = ldp_fec_.find(Prefix{E.loopbacks.front(), 32});
        return it == ldp_fec_.end() ? -1 : it->second;
    };

    if (vrf) {
        if (e == r || !topo_.routers[e].vpn_label) return std::nullopt;
        vpn = topo_.routers[e].vpn_label;
        fec = transport(e);
        if (fec < 0) return std::nullopt;
    } else {
        const auto& O = topo_.routers[*o];
        bool internal = false;
        std::optional<Prefix> pfx;
        if (std::count(O.loopbacks.begin(), O.loopbacks.end(), dst)) {
            internal = O.mpls;
            pfx = Prefix{dst, 32};
        } else {
            for (const Link& l : topo_.links) {
                if (l.addr_a == dst || l.addr_b == dst) {
                    internal = (topo_.routers[l.a].mpls && topo_.routers[l.b].mpls) || l.igp;
                    pfx = l.prefix();
                    break;
                }
            }
        }
        if (internal) {
            auto it = ldp_fec_.find(*pfx);
            if (it == ldp_fec_.end()) return std::nullopt;
            fec = it->second;
        } else {
            if (e == r) return std::nullopt;
            if (topo_.signalling == Signalling::RsvpTe) {
                auto t = te_fec_.find({r, e});
                if (t != te_fec_.end()) fec = t->second;
            }
            if (fec < 0) {
                if (topo_.routers[e].next_hop_self) {
                    fec = transport(e);
                } else {
                    auto x = external_fec_.find(e);
                    if (x != external_fec_.end()) fec = x->second;
                }
            }
        }
        if (fec < 0) return std::nullopt;
    }

    const Fec& f = fecs_[fec];
    if (f.kind == FecKind::Te && f.head != r) return std::nullopt;
    int x = f.kind == FecKind::Te ? f.egresses.front() : fec_egress(fec, r);
    if (x == r) return std::nullopt;
    auto iface = next_iface(r, x);
    if (!iface) return std::nullopt;
    int n = ifaces_[r][*iface].peer;
    Push push;
    push.iface = *iface;
    if (n == x) {
        std::uint32_t adv = advertised(x, fec);
        if (adv != kImplicitNull) push.labels.push_back(adv);
    } else {
        auto l = local_[n].find(fec);
        if (l == local_[n].end()) return std::nullopt;
        push.labels.push_back(l->second);
    }
    if (vpn) push.labels.push_back(*vpn);
    if (push.labels.empty()) return std::nullopt;
    return push;
}

std::vector<LabelStackEntry> Network::quote_of(int r, const std::vector<LabelStackEntry>& received) const {
    const auto& R = topo_.routers[r];
    if (!R.rfc4950) return {};
    std::vector<LabelStackEntry> q;
    for (auto& e : received)
        if (!(R.os == Os::Cisco152 && e.label == kExplicitNullV4)) q.push_back(e);
    if (!q.empty()) q.back().bottom_of_stack = true;
    return q;
}

StepResult Network::expire(int r, const SimPacket& p, Ipv4 src, int qttl, std::vector<LabelStackEntry> quote,
                           std::optional<Emission> tunnelled) const {
    const auto& R = topo_.routers[r];
    if (p.kind == PacketKind::Reply) return drop("reply expired in transit");
    if (!R.icmp) return drop("silent router");
    Emission em = tunnelled ? *tunnelled : Emission{SimPacket{}, r, -1};
    SimPacket& rp = em.packet;
    if (!tunnelled) rp.ip_ttl = R.te_initial;
    rp.src = src;
    rp.dst = p.src;
    rp.kind = PacketKind::Reply;
    rp.flow = p.flow;
    rp.vrf = p.vrf;
    rp.reply_kind = ReplyKind::TimeExceeded;
    rp.quoted_ttl = qttl;
    rp.quoted_stack = std::move(quote);
    rp.responder = r;
    rp.links = p.links;
    StepResult s;
    s.kind = StepResult::Expire;
    s.reply = std::move(em);
    return s;
}

StepResult Network::deliver(int r, SimPacket& p, int in, std::optional<Ipv4> src_override) const {
    const auto& R = topo_.routers[r];
    StepResult s;
    s.kind = StepResult::Deliver;
    if (p.kind == PacketKind::Reply) return s;
    SimPacket rp;
    if (p.kind == PacketKind::Udp) {
        if (!R.icmp) return s;
        rp.src = src_override ? *src_override : (in >= 0 ? ifaces_[r][in].addr : p.dst);
        rp.ip_ttl = R.te_initial;
        rp.reply_kind = ReplyKind::DestUnreachable;
        rp.quoted_ttl = p.ip_ttl;
    } else {
        if (!R.echo) return s;
        rp.src = p.dst;
        rp.ip_ttl = R.er_initial;
        rp.reply_kind = ReplyKind::EchoReply;
    }
    rp.dst = p.src;
    rp.kind = PacketKind::Reply;
    rp.flow = p.flow;
    rp.vrf = p.vrf;
    rp.responder = r;
    rp.links = p.links;
    s.reply = Emission{rp, r, -1};
    return s;
}

StepResult Network::ip_part(int r, SimPacket& p, int in, bool local, bool skip_dec, std::optional<Ipv4> src_override,
                            const std::vector<LabelStackEntry>& quote) const {
    const auto& R = topo_.routers[r];
    if (is_local(r, p.dst)) return deliver(r, p, in, src_override);
    if (!local && !skip_dec) {
        if (p.ip_ttl <= 1) {
            Ipv4 src = src_override ? *src_override : ifaces_[r][in].addr;
            return expire(r, p, src, p.ip_ttl, quote_of(r, quote));
        }
        p.ip_ttl -= 1;
    }
    if (auto push = push_for(r, p.dst, p.vrf)) {
        int lse = R.propagate ? p.ip_ttl : 255;
        if (local && R.os == Os::JunosOlive) p.ip_ttl -= 1;
        p.stack.clear();
        for (auto label : push->labels) p.stack.push_back(LabelStackEntry{label, 0, false, std::uint8_t(lse)});
        p.stack.back().bottom_of_stack = true;
        return forward(push->iface);
    }
    auto iface = route_iface(r, p.dst);
    if (!iface) return drop("no route to " + p.dst.str() + " at " + R.name);
    return forward(*iface);
}

StepResult Network::vpn_part(int r, SimPacket& p, int in, const std::vector<LabelStackEntry>& received) const {
    const auto& R = topo_.routers[r];
    LabelStackEntry top = p.stack.front();
    p.stack.erase(p.stack.begin());
    p.vrf = true;
    if (is_cisco(R.os)) {
        p.ip_ttl = std::min(p.ip_ttl, int(top.lse_ttl));
        std::optional<Ipv4> vrf_src;
        if (is_local(r, p.dst)) {
            vrf_src = p.dst;
        } else if (auto i = route_iface(r, p.dst)) {
            vrf_src = ifaces_[r][*i].addr;
        }
        return ip_part(r, p, in, false, false, vrf_src, received);
    }
    int nt = top.lse_ttl - 1;
    if (nt <= 0) return expire(r, p, ifaces_[r][in].addr, std::min(p.ip_ttl, int(top.lse_ttl)), quote_of(r, received));
    p.ip_ttl = std::min(p.ip_ttl, nt);
    if (is_local(r, p.dst)) {
        for (std::size_t i = 0; i < ifaces_[r].size(); ++i)
            if (ifaces_[r][i].addr == p.dst) return forward(int(i));
        return deliver(r, p, in, std::nullopt);
    }
    auto iface = route_iface(r, p.dst);
    if (!iface) return drop("no VRF route at " + R.name);
    return forward(*iface);
}

StepResult Network::step(int r, SimPacket& p, int in, bool local) const {
    const auto& R = topo_.routers[r];
    if (!local && in >= 0) {
        if (ifaces_[r][in].vrf)
            p.vrf = true;
        else if (p.stack.empty())
            p.vrf = false;
    }
    if (p.stack.empty()) return ip_part(r, p, in, local, false, std::nullopt, {});
    if (!R.mpls) return drop("labelled packet at non-MPLS router " + R.name);

    const std::vector<LabelStackEntry> received = p.stack;
    LabelStackEntry& top = p.stack.front();
    Ipv4 in_addr = in >= 0 ? ifaces_[r][in].addr : p.src;

    if (top.label == kExplicitNullV4) {
        int nt = top.lse_ttl - 1;
        if (nt <= 0) return expire(r, p, in_addr, std::min(p.ip_ttl, int(top.lse_ttl)), quote_of(r, received));
        p.stack.erase(p.stack.begin());
        if (!p.stack.empty()) return vpn_part(r, p, in, received);
        if (is_local(r, p.dst)) return deliver(r, p, in, std::nullopt);
        if (R.os == Os::Cisco152) {
            if (R.propagate)
                p.ip_ttl = nt;
            else if (p.ip_ttl > 1)
                p.ip_ttl = top.lse_ttl > kPropagatedLseCeiling ? p.ip_ttl - 1 : std::min(p.ip_ttl - 1, nt + 2);
        } else {
            int v = std::min(p.ip_ttl - 1, nt);
            if (v <= 0) return expire(r, p, in_addr, p.ip_ttl, {});
            p.ip_ttl = v;
        }
        return ip_part(r, p, in, false, true, std::nullopt, {});
    }
    if (R.vpn_label && top.label == *R.vpn_label) return vpn_part(r, p, in, received);

    auto it = lfib_[r].find(top.label);
    if (it == lfib_[r].end()) return drop("unknown label " + std::to_string(top.label) + " at " + R.name);
    const LfibEntry& e = it->second;
    int nt = top.lse_ttl - 1;
    switch (e.kind) {
        case LfibEntry::Swap: {
            if (nt <= 0) {
                int qttl = is_cisco(R.os) ? p.ip_ttl : std::min(p.ip_ttl, int(top.lse_ttl));
                if (is_cisco(R.os) || R.icmp_tunneling) {
                    int init = is_cisco(R.os) ? R.te_initial : 254;
                    Emission em;
                    em.router = r;
                    em.out_iface = e.iface;
                    em.packet.ip_ttl = init;
                    em.packet.stack = received;
                    em.packet.stack.front().label = e.out;
                    em.packet.stack.front().lse_ttl = std::uint8_t(init);
                    return expire(r, p, in_addr, qttl, quote_of(r, received), em);
                }
                return expire(r, p, in_addr, qttl, quote_of(r, received));
            }
            top.label = e.out;
            top.lse_ttl = std::uint8_t(nt);
            return forward(e.iface);
        }
        case LfibEntry::PopPhp: {
            if (nt <= 0) return expire(r, p, in_addr, std::min(p.ip_ttl, int(top.lse_ttl)), quote_of(r, received));
            p.stack.erase(p.stack.begin());
            if (!p.stack.empty())
                p.stack.front().lse_ttl = std::uint8_t(std::min(int(p.stack.front().lse_ttl), nt));
            else
                p.ip_ttl = php_pop_ttl(R.os, R.propagate, p.ip_ttl, nt);
            return forward(e.iface);
        }
        case LfibEntry::PopUntagged: {
            p.ip_ttl = std::min(p.ip_ttl, int(top.lse_ttl));
            p.stack.erase(p.stack.begin());
            return ip_part(r, p, in, false, false, std::nullopt, received);
        }
    }
    return drop("unreachable");
}

Network::Arrival Network::walk(const Emission& e) const {
    int r = e.router;
    SimPacket p = e.packet;
    int in = -1;
    bool local = true;
    auto traverse = [&](int iface) {
        const Iface& f = ifaces_[r][iface];
        in = f.peer_iface;
        r = f.peer;
        local = false;
        p.links += 1;
    };
    if (e.out_iface >= 0) traverse(e.out_iface);
    for (int guard = 0; guard < kWalkLimit; ++guard) {
        StepResult s = step(r, p, in, local);
        switch (s.kind) {
            case StepResult::Forward: traverse(s.out_iface); break;
            case StepResult::Deliver: return Arrival{true, r, p, s.reply};
            case StepResult::Expire: return Arrival{false, r, p, s.reply};
            case StepResult::Drop: return Arrival{false, r, p, std::nullopt};
        }
    }
    return Arrival{false, r, p, std::nullopt};
}

Network::VpReply Network::exchange(SimPacket p) const {
    p.src = vantage_address();
    p.links = 0;
    auto a = walk(Emission{p, vantage_, -1});
    if (!a.reply) return {};
    auto b = walk(*a.reply);
    if (!b.delivered || b.router != vantage_ || b.packet.kind != PacketKind::Reply) return {};
    return VpReply{true, b.packet};
}

}  // namespace tnt::sim
