#include "tnt/sim/catalog.hpp"

#include <algorithm>

#include "tnt/sim/network.hpp"
#include "tnt/sim/sim_prober.hpp"

#ifndef TNT_SCENARIO_DIR
#define TNT_SCENARIO_DIR "scenarios"
#endif

namespace tnt::sim {

namespace fs = std::filesystem;

fs::path default_scenario_dir() { return TNT_SCENARIO_DIR; }

std::vector<fs::path> list_scenarios(const fs::path& dir) {
    std::vector<fs::path> out;
    std::error_code ec;
    for (auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".scn") out.push_back(e.path());
    if (ec) throw ScenarioError("cannot list scenario directory '" + dir.string() + "': " + ec.message());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<fs::path> find_scenario(const std::string& name, const fs::path& dir) {
    fs::path direct(name);
    if (direct.extension() == ".scn" && fs::is_regular_file(direct)) return direct;
    fs::path in_dir = dir / (name + ".scn");
    if (fs::is_regular_file(in_dir)) return in_dir;
    return std::nullopt;
}

EngineConfig apply_engine_keys(const std::map<std::string, int>& keys, EngineConfig cfg) {
    auto range = [](const std::string& k, int v, int lo, int hi) {
        if (v < lo || v > hi)
            throw ScenarioError("engine " + k + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
        return v;
    };
    for (auto& [k, v] : keys) {
        if (k == "starting_ttl")
            cfg.starting_ttl = range(k, v, 1, 255);
        else if (k == "max_ttl")
            cfg.max_ttl = range(k, v, 1, 255);
        else if (k == "gap_limit")
            cfg.gap_limit = range(k, v, 1, 255);
        else if (k == "t_frpla")
            cfg.thresholds.t_frpla = range(k, v, 0, 255);
        else if (k == "t_rtla")
            cfg.thresholds.t_rtla = range(k, v, 0, 255);
        else if (k == "t_lse_ttl")
            cfg.thresholds.t_lse_ttl = range(k, v, 0, 254);
        else if (k == "t_uturn")
            cfg.thresholds.t_uturn = range(k, v, 0, 255);
        else if (k == "brute_force")
            cfg.brute_force = range(k, v, 0, 1) != 0;
        else
            throw ScenarioError("unknown engine key '" + k + "'");
    }
    return cfg;
}

AnnotatedTrace run_trace(const Topology& topo, Ipv4 target, const EngineConfig& cfg) {
    Network net(topo);
    SimProber prober(net);
    return trace_naughty_tunnel(target, cfg, prober);
}

ScenarioRun run_scenario(const Topology& topo, const EngineConfig& base) {
    if (!topo.target) throw ScenarioError("scenario '" + topo.name + "' has no target");
    ScenarioRun r;
    r.config = apply_engine_keys(topo.engine, base);
    r.dialect = dialect_from_string(topo.dialect).value_or(Dialect::Tnt);
    r.trace = run_trace(topo, *topo.target, r.config);
    return r;
}

}  // namespace tnt::sim
