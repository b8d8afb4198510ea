#include "tnt/engine.hpp"

#include <algorithm>
#include <cstdlib>

#include "tnt/classifier.hpp"

namespace tnt {

namespace {

std::optional<int> raw_uturn(const HopRecord& h) {
    if (!h.responded() || !h.lse_stack.empty() || is_junos(h)) return std::nullopt;
    return return_diff(h);
}

}  // namespace

bool uturn_confirmed(const std::vector<TraceHop>& hops, std::size_t i, const Thresholds& t) {
    auto u = raw_uturn(hops[i].hop);
    if (!u || std::abs(*u) <= t.t_uturn) return false;
    for (std::size_t j : {i - 1, i + 1}) {
        if (j >= hops.size()) continue;
        auto v = raw_uturn(hops[j].hop);
        if (v && std::abs(*u) + std::abs(*v) >= t.uturn_pair_min) return true;
    }
    return false;
}

Code classify_hop(const std::vector<TraceHop>& hops, std::size_t i, const Thresholds& t) {
    const HopRecord* cur = &hops[i].hop;
    if (!cur->responded()) return Code::None;
    Code code = check_indicators(cur, t).code;
    if (code == Code::UTURN && !uturn_confirmed(hops, i, t)) code = Code::None;
    if (code != Code::None) return code;
    const HopRecord* prev = i > 0 ? &hops[i - 1].hop : nullptr;
    const HopRecord* next = i + 1 < hops.size() ? &hops[i + 1].hop : nullptr;
    return check_triggers(prev, cur, next, t);
}

AnnotatedTrace trace_naughty_tunnel(Ipv4 target, const EngineConfig& cfg, Prober& prober, std::uint16_t flow_id) {
    AnnotatedTrace trace;
    trace.target = target;
    trace.flow_id = flow_id;
    Session s(prober, flow_id);
    RevealConfig rc{cfg.max_ttl, cfg.gap_limit, cfg.iteration_cap};
    const Thresholds& th = cfg.thresholds;

    int ttl = std::max(1, cfg.starting_ttl);
    int gaps = 0;
    bool halted = false;
    auto probe_next = [&]() {
        if (halted || ttl > cfg.max_ttl) {
            halted = true;
            return;
        }
        TraceHop th_hop;
        th_hop.hop = s.trace_hop(target, ttl++, ProbePurpose::Original);
        const HopRecord& h = th_hop.hop;
        trace.hops.push_back(th_hop);
        if (!h.responded()) {
            if (++gaps >= cfg.gap_limit) halted = true;
            return;
        }
        gaps = 0;
        if (h.address == target || h.kind == ReplyKind::DestUnreachable || h.kind == ReplyKind::EchoReply)
            halted = true;
    };

    std::size_t shadow_until = 0;
    try {
        for (std::size_t i = 0;; ++i) {
            while (!halted && trace.hops.size() <= i + 1) probe_next();
            if (i >= trace.hops.size()) break;
            const HopRecord* prev = i > 0 ? &trace.hops[i - 1].hop : nullptr;
            const HopRecord* cur = &trace.hops[i].hop;
            TunnelAnnotation& ann = trace.hops[i].annotation;
            if (!cur->responded()) continue;

            IndicatorOutcome ind = check_indicators(cur, th);
            Code code = classify_hop(trace.hops, i, th);
            if ((code == Code::FRPLA || code == Code::RTLA) && cfg.suppress_consecutive && !cfg.brute_force &&
                i <= shadow_until && shadow_until > 0)
                code = Code::None;
            ann.code = code;
            ann.length_estimate = code == Code::LSE_TTL ? ind.length_estimate : trigger_length_estimate(code, *cur, th);

            bool eligible = prev && prev->responded() && prev->address != cur->address;
            bool fire = code == Code::LSE_TTL || code == Code::FRPLA || code == Code::RTLA || code == Code::DUP_IP;
            if (!eligible || !(fire || cfg.brute_force)) continue;

            RevelationResult r = reveal_tunnel(*prev, *cur, code, s, rc);
            ann.state = r.state;
            ann.revealed = r.revealed;
            std::size_t shadow = std::max<std::size_t>(r.revealed.size(), std::max(0, ann.length_estimate.value_or(0)));
            if (shadow > 0) shadow_until = i + shadow;
            if (code == Code::RTLA && r.state == RevealState::NothingToReveal && !cfg.brute_force) {
                ann.code = Code::UTURN;
                ann.state = RevealState::NotAttempted;
                ann.length_estimate.reset();
            }
        }
    } catch (const ProbeFailure& e) {
        trace.truncated = true;
        trace.diagnostic = e.what();
    }

    bool any = false;
    for (auto& h : trace.hops) any = any || h.hop.responded();
    if (!any && !trace.truncated) {
        trace.hops.clear();
        trace.diagnostic = "no hop responded";
    }
    trace.probe_counts = s.counts();
    return trace;
}

}  // namespace tnt
