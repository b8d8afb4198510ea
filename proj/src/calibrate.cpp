#include "tnt/calibrate.hpp"

#include <algorithm>

#include "tnt/classifier.hpp"
#include "tnt/sim/catalog.hpp"

namespace tnt {

void apply_return_noise(sim::Topology& topo, double fraction, int min_extra, int max_extra, std::mt19937& rng) {
    std::bernoulli_distribution pick(fraction);
    std::uniform_int_distribution<int> extra(min_extra, max_extra);
    for (auto& r : topo.routers) {
        if (r.os == sim::Os::Host) continue;
        if (pick(rng)) r.return_extra += extra(rng);
    }
}

std::vector<sim::Topology> noisy_suite(const std::vector<sim::Topology>& clean, const NoiseSpec& noise) {
    std::mt19937 rng(noise.seed);
    std::vector<sim::Topology> out;
    for (int v = 0; v < noise.variants; ++v) {
        for (auto t : clean) {
            apply_return_noise(t, noise.fraction, noise.min_extra, noise.max_extra, rng);
            out.push_back(std::move(t));
        }
    }
    return out;
}

GroundTruth ground_truth(const AnnotatedTrace& brute) {
    GroundTruth g;
    std::size_t shadow_until = 0;
    for (std::size_t i = 1; i < brute.hops.size(); ++i) {
        const HopRecord& prev = brute.hops[i - 1].hop;
        const HopRecord& cur = brute.hops[i].hop;
        if (!prev.responded() || !cur.responded() || prev.address == cur.address) continue;
        const TunnelAnnotation& a = brute.hops[i].annotation;
        HopPair key{*prev.address, *cur.address};
        if (i <= shadow_until) {
            ++g.shadowed;
            continue;
        }
        if (!a.revealed.empty() || a.code == Code::LSE_TTL)
            shadow_until = i + std::max<std::size_t>(a.revealed.size(), std::max(0, a.length_estimate.value_or(0)));
        switch (a.state) {
            case RevealState::Dpr:
            case RevealState::Brpr:
            case RevealState::Mix: g.tunnels.insert(key); break;
            case RevealState::NothingToReveal: g.plain.insert(key); break;
            case RevealState::TargetNotReached:
            case RevealState::IngNotFound: ++g.inconclusive; break;
            default: break;
        }
    }
    return g;
}

std::optional<double> RocPoint::tpr() const {
    if (positives == 0) return std::nullopt;
    return double(true_positives) / double(positives);
}

std::optional<double> RocPoint::fpr() const {
    if (negatives == 0) return std::nullopt;
    return double(false_positives) / double(negatives);
}

RocCase prepare_case(const sim::Topology& topo, const EngineConfig& base) {
    if (!topo.target) throw sim::ScenarioError("scenario '" + topo.name + "' has no target");
    RocCase c{topo, *topo.target, sim::apply_engine_keys(topo.engine, base), {}, {}};
    EngineConfig bf = c.base;
    bf.brute_force = true;
    c.brute = sim::run_trace(topo, c.target, bf);
    c.truth = ground_truth(c.brute);
    return c;
}

RocPoint evaluate(const std::vector<RocCase>& cases, int t_rtla, int t_frpla) {
    RocPoint p;
    p.t_rtla = t_rtla;
    p.t_frpla = t_frpla;
    for (const auto& c : cases) {
        EngineConfig cfg = c.base;
        cfg.brute_force = false;
        cfg.thresholds.t_rtla = t_rtla;
        cfg.thresholds.t_frpla = t_frpla;
        AnnotatedTrace t = sim::run_trace(c.topo, c.target, cfg);
        p.positives += long(c.truth.tunnels.size());
        p.negatives += long(c.truth.plain.size());
        for (std::size_t i = 1; i < t.hops.size(); ++i) {
            const HopRecord& prev = t.hops[i - 1].hop;
            const HopRecord& cur = t.hops[i].hop;
            if (!prev.responded() || !cur.responded()) continue;
            HopPair key{*prev.address, *cur.address};
            const TunnelAnnotation& a = t.hops[i].annotation;
            if (c.truth.tunnels.count(key) && !a.revealed.empty()) ++p.true_positives;
            Code raw = classify_hop(t.hops, i, cfg.thresholds);
            bool threshold_trigger = raw == Code::FRPLA || raw == Code::RTLA;
            if (c.truth.plain.count(key) && threshold_trigger) ++p.false_positives;
        }
    }
    return p;
}

std::vector<RocPoint> roc_sweep(const std::vector<RocCase>& cases, int lo, int hi) {
    std::vector<RocPoint> out;
    for (int r = lo; r <= hi; ++r)
        for (int f = lo; f <= hi; ++f) out.push_back(evaluate(cases, r, f));
    return out;
}

}  // namespace tnt
