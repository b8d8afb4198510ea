#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "tnt/engine.hpp"
#include "tnt/sim/scenario.hpp"

namespace tnt {

struct NoiseSpec {
    double fraction = 0.3;
    int min_extra = 1;
    int max_extra = 3;
    std::uint32_t seed = 1;
    int variants = 1;
};

// Lengthens the return path of a random subset of routers (the vantage host is never touched).
void apply_return_noise(sim::Topology& topo, double fraction, int min_extra, int max_extra, std::mt19937& rng);
std::vector<sim::Topology> noisy_suite(const std::vector<sim::Topology>& clean, const NoiseSpec& noise);

using HopPair = std::pair<Ipv4, Ipv4>;

struct GroundTruth {
    std::set<HopPair> tunnels;  // brute force revealed two or more hops
    std::set<HopPair> plain;    // brute force revealed nothing
    long inconclusive = 0;
    long shadowed = 0;  // pairs right after a tunnel egress, within its revealed length
};

GroundTruth ground_truth(const AnnotatedTrace& brute_force_trace);

struct RocPoint {
    int t_rtla = 0;
    int t_frpla = 0;
    long true_positives = 0;
    long positives = 0;
    long false_positives = 0;
    long negatives = 0;

    std::optional<double> tpr() const;
    std::optional<double> fpr() const;
};

struct RocCase {
    sim::Topology topo;
    Ipv4 target;
    EngineConfig base;
    AnnotatedTrace brute;
    GroundTruth truth;
};

RocCase prepare_case(const sim::Topology& topo, const EngineConfig& base = {});
RocPoint evaluate(const std::vector<RocCase>& cases, int t_rtla, int t_frpla);
// Sweeps t_rtla x t_frpla over [lo, hi]^2, row-major in t_rtla.
std::vector<RocPoint> roc_sweep(const std::vector<RocCase>& cases, int lo, int hi);

}  // namespace tnt
