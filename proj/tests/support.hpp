#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "tnt/engine.hpp"
#include "tnt/report.hpp"
#include "tnt/sim/catalog.hpp"
#include "tnt/sim/chain.hpp"
#include "tnt/sim/network.hpp"
#include "tnt/sim/sim_prober.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return TNT_SOURCE_DIR; }
inline std::filesystem::path scenario_dir() { return source_dir() / "scenarios"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline tnt::sim::Topology scenario(const std::string& name) {
    return tnt::sim::load_scenario_file(scenario_dir() / (name + ".scn"));
}

inline tnt::sim::ScenarioRun run(const std::string& name) { return tnt::sim::run_scenario(scenario(name)); }

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(f, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

inline std::vector<std::string> golden_names() {
    std::vector<std::string> out;
    for (auto& e : std::filesystem::directory_iterator(golden_dir()))
        if (e.path().extension() == ".golden") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

inline tnt::AnnotatedTrace chain_trace(const tnt::sim::ChainSpec& spec, tnt::EngineConfig cfg = {}) {
    cfg.starting_ttl = 1;
    return tnt::sim::run_trace(tnt::sim::make_chain(spec), tnt::sim::kChainTarget, cfg);
}

inline const tnt::TraceHop* hop_at(const tnt::AnnotatedTrace& t, int probe_ttl) {
    for (auto& h : t.hops)
        if (h.hop.probe_ttl == probe_ttl) return &h;
    return nullptr;
}

inline const tnt::TraceHop* hop_with(const tnt::AnnotatedTrace& t, const std::string& addr) {
    for (auto& h : t.hops)
        if (h.hop.address && h.hop.address->str() == addr) return &h;
    return nullptr;
}

}  // namespace testing
