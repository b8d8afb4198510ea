#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnt/engine.hpp"
#include "tnt/report.hpp"
#include "tnt/sim/scenario.hpp"

namespace tnt::sim {

std::filesystem::path default_scenario_dir();
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);
// Accepts a bare scenario name or a path to a .scn file.
std::optional<std::filesystem::path> find_scenario(const std::string& name, const std::filesystem::path& dir);

// Applies `engine <key> <value>` overrides; throws ScenarioError on out-of-range values.
EngineConfig apply_engine_keys(const std::map<std::string, int>& keys, EngineConfig cfg);

struct ScenarioRun {
    EngineConfig config;
    Dialect dialect = Dialect::Tnt;
    AnnotatedTrace trace;
};

// Traces the scenario target with the scenario's own engine keys layered over `base`.
ScenarioRun run_scenario(const Topology& topo, const EngineConfig& base = {});
AnnotatedTrace run_trace(const Topology& topo, Ipv4 target, const EngineConfig& cfg);

}  // namespace tnt::sim
