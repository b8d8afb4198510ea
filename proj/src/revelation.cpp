#include "tnt/revelation.hpp"

#include <algorithm>
#include <set>

namespace tnt {

void Session::charge(ProbePurpose purpose, long before) {
    long n = prober_.probes_emitted() - before;
    switch (purpose) {
        case ProbePurpose::Original: counts_.original += n; break;
        case ProbePurpose::Revelation: counts_.revelation += n; break;
        case ProbePurpose::Ping: counts_.ping += n; break;
        case ProbePurpose::Buddy: counts_.buddy += n; break;
    }
}

HopRecord Session::trace_hop(Ipv4 target, int ttl, ProbePurpose purpose) {
    long before = prober_.probes_emitted();
    ProbeReply r = prober_.trace_probe(target, ttl, flow_id_);
    charge(purpose, before);
    HopRecord h;
    h.probe_ttl = ttl;
    if (!r.responded()) return h;
    h.address = r.address;
    h.name = r.name;
    h.kind = r.kind;
    h.ttl_te = r.ttl;
    h.qttl = r.qttl;
    h.lse_stack = r.stack;
    h.rtt_ms = r.rtt_ms;
    h.ttl_er = ping(*r.address);
    return h;
}

std::optional<int> Session::ping(Ipv4 address) {
    auto it = ping_cache_.find(address);
    if (it != ping_cache_.end()) return it->second;
    long before = prober_.probes_emitted();
    ProbeReply r = prober_.echo(address);
    charge(ProbePurpose::Ping, before);
    std::optional<int> ttl;
    if (r.responded() && r.kind == ReplyKind::EchoReply) ttl = r.ttl;
    ping_cache_[address] = ttl;
    return ttl;
}

std::optional<Ipv4> Session::udp_source(Ipv4 target) {
    long before = prober_.probes_emitted();
    ProbeReply r = prober_.udp(target);
    charge(ProbePurpose::Buddy, before);
    if (!r.responded() || r.kind != ReplyKind::DestUnreachable) return std::nullopt;
    return r.address;
}

std::optional<Ipv4> udp_incoming_interface_probe(Ipv4 target, Session& session) { return session.udp_source(target); }

std::optional<Ipv4> buddy(Ipv4 address, Session& session) {
    std::uint32_t v = address.value;
    std::uint32_t low = v & 3u;
    if (low == 1 || low == 2) {
        Ipv4 cand((v & ~3u) | (low == 1 ? 2u : 1u));
        if (session.udp_source(cand)) return cand;
    }
    Ipv4 cand(v ^ 1u);
    if (session.udp_source(cand)) return cand;
    return std::nullopt;
}

namespace {

bool reached(const HopRecord& h, Ipv4 target) {
    return h.address == target || h.kind == ReplyKind::DestUnreachable || h.kind == ReplyKind::EchoReply;
}

// Probes from `ttl` toward `target` until it answers; responding hops in order.
std::vector<HopRecord> trace_toward(Ipv4 target, int ttl, Session& s, const RevealConfig& cfg) {
    std::vector<HopRecord> out;
    int gaps = 0;
    for (int t = ttl; t <= cfg.max_ttl; ++t) {
        HopRecord h = s.trace_hop(target, t, ProbePurpose::Revelation);
        if (!h.responded()) {
            if (++gaps >= cfg.gap_limit) break;
            continue;
        }
        gaps = 0;
        out.push_back(h);
        if (reached(h, target)) break;
    }
    return out;
}

}  // namespace

RevelationResult reveal_tunnel(const HopRecord& ingress, const HopRecord& egress, Code code, Session& s,
                               const RevealConfig& cfg) {
    RevelationResult res;
    const long before = s.counts().revelation;
    auto finish = [&](RevealState st) {
        res.state = st;
        res.probes = s.counts().revelation - before;
        switch (st) {
            case RevealState::TargetNotReached: s.counts().target_not_reached += res.probes; break;
            case RevealState::IngNotFound: s.counts().ing_not_found += res.probes; break;
            case RevealState::NothingToReveal: s.counts().no_revelation += res.probes; break;
            default: s.counts().revealed += res.probes; break;
        }
        return res;
    };
    if (!ingress.responded() || !egress.responded()) {
        res.diagnostic = "ingress or egress unresponsive";
        return finish(RevealState::TargetNotReached);
    }
    const Ipv4 ing = *ingress.address;
    const Ipv4 egr = *egress.address;

    auto route = trace_toward(egr, std::max(1, ingress.probe_ttl - 2), s, cfg);
    if (route.empty() || route.back().address != egr) return finish(RevealState::TargetNotReached);
    auto ing_it = std::find_if(route.begin(), route.end(), [&](const HopRecord& h) { return h.address == ing; });
    if (ing_it == route.end()) return finish(RevealState::IngNotFound);

    std::vector<HopRecord> between(ing_it + 1, route.end() - 1);
    if (between.size() >= 2) {
        for (auto& h : between) res.revealed.push_back(RevealedHop{h, 0, false});
        return finish(RevealState::Dpr);
    }

    std::set<Ipv4> seen;
    std::vector<HopRecord> round = between;
    Ipv4 target = egr;
    bool first = true;
    bool buddy_round = false;
    const bool buddy_allowed = code != Code::LSE_TTL;
    bool buddy_available = buddy_allowed;
    bool dpr_kind = false;
    bool brpr_kind = false;
    int next_step = 1;
    const int ttl = ingress.probe_ttl + 1;

    for (int iter = 0; iter <= cfg.iteration_cap; ++iter) {
        std::vector<HopRecord> fresh;
        bool guard = false;
        for (auto& h : round) {
            if (h.address == target) break;
            if (h.address == ing || (h.address == egr && !buddy_round) || seen.count(*h.address)) {
                guard = true;
                break;
            }
            fresh.push_back(h);
        }
        if (!fresh.empty()) {
            int step = first ? 0 : next_step++;
            std::vector<RevealedHop> batch;
            for (auto& h : fresh) {
                seen.insert(*h.address);
                batch.push_back(RevealedHop{h, step, buddy_round});
            }
            res.revealed.insert(res.revealed.begin(), batch.begin(), batch.end());
            (fresh.size() >= 2 ? dpr_kind : brpr_kind) = true;
            target = *fresh.front().address;
            buddy_available = buddy_allowed;
            buddy_round = false;
            first = false;
            if (guard) break;
        } else {
            first = false;
            if (guard || !buddy_available) break;
            buddy_available = false;
            auto b = buddy(target, s);
            if (!b) break;
            target = *b;
            buddy_round = true;
        }
        round = trace_toward(target, ttl, s, cfg);
    }

    if (res.revealed.empty()) return finish(RevealState::NothingToReveal);
    if (res.revealed.size() == 1) return finish(RevealState::OneHopLsp);
    if (dpr_kind && brpr_kind) return finish(RevealState::Mix);
    return finish(dpr_kind ? RevealState::Dpr : RevealState::Brpr);
}

}  // namespace tnt
