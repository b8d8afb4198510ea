#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tnt/calibrate.hpp"
#include "tnt/engine.hpp"
#include "tnt/live/live_prober.hpp"
#include "tnt/report.hpp"
#include "tnt/sim/catalog.hpp"
#include "tnt/sim/network.hpp"
#include "tnt/sim/sim_prober.hpp"
#include "tnt/stats.hpp"

namespace {

using namespace tnt;

enum Exit { kOk = 0, kUsage = 1, kProbing = 2, kScenario = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineFlags {
    std::optional<int> t_frpla, t_rtla, t_lse_ttl, t_uturn, starting_ttl, gap_limit, max_ttl;
    bool brute_force = false;

    void add(CLI::App* app) {
        app->add_option("--t-frpla", t_frpla, "FRPLA trigger threshold")->check(CLI::Range(0, 255));
        app->add_option("--t-rtla", t_rtla, "RTLA trigger threshold")->check(CLI::Range(0, 255));
        app->add_option("--t-lse-ttl", t_lse_ttl, "quoted LSE-TTL above which a tunnel is Opaque")
            ->check(CLI::Range(0, 254));
        app->add_option("--t-uturn", t_uturn, "per-hop UTURN threshold")->check(CLI::Range(0, 255));
        app->add_option("--starting-ttl", starting_ttl, "first probed TTL")->check(CLI::Range(1, 255));
        app->add_option("--gap-limit", gap_limit, "consecutive silent hops before giving up")->check(CLI::Range(1, 255));
        app->add_option("--max-ttl", max_ttl, "last probed TTL")->check(CLI::Range(1, 255));
        app->add_flag("--brute-force", brute_force, "attempt revelation on every hop pair");
    }

    // Flags given on the command line win over scenario keys, which win over defaults.
    EngineConfig resolve(const std::map<std::string, int>& scenario_keys = {}) const {
        EngineConfig c = sim::apply_engine_keys(scenario_keys, EngineConfig{});
        if (t_frpla) c.thresholds.t_frpla = *t_frpla;
        if (t_rtla) c.thresholds.t_rtla = *t_rtla;
        if (t_lse_ttl) c.thresholds.t_lse_ttl = *t_lse_ttl;
        if (t_uturn) c.thresholds.t_uturn = *t_uturn;
        if (starting_ttl) c.starting_ttl = *starting_ttl;
        if (gap_limit) c.gap_limit = *gap_limit;
        if (max_ttl) c.max_ttl = *max_ttl;
        if (brute_force) c.brute_force = true;
        return c;
    }
};

struct OutputFlags {
    std::string output = "text";
    std::string dialect;

    void add(CLI::App* app, const std::string& default_output = "text") {
        output = default_output;
        app->add_option("--output", output, "text or records")
            ->check(CLI::IsMember({"text", "records"}))
            ->capture_default_str();
        app->add_option("--dialect", dialect, "transcript dialect for text output")
            ->check(CLI::IsMember({"tnt", "tracetunnel"}));
    }

    void emit(const AnnotatedTrace& t, Dialect fallback) const {
        if (output == "records") {
            std::cout << dump_record(t) << '\n';
            return;
        }
        Dialect d = dialect.empty() ? fallback : *dialect_from_string(dialect);
        std::cout << dump_text(t, d);
    }
};

Ipv4 parse_address(const std::string& s) {
    auto a = Ipv4::parse(s);
    if (!a) throw UsageError("not an IPv4 address: '" + s + "'");
    return *a;
}

std::istream& open_input(const std::string& path, std::ifstream& file) {
    if (path == "-") return std::cin;
    file.open(path);
    if (!file) throw UsageError("cannot open '" + path + "'");
    return file;
}

// Owns whichever backend the flags select.
struct Backend {
    std::optional<sim::Topology> topo;
    std::unique_ptr<sim::Network> net;
    std::unique_ptr<Prober> prober;

    static Backend make(const std::string& kind, const std::string& topology) {
        Backend b;
        if (kind == "sim") {
            if (topology.empty()) throw UsageError("--backend sim needs --topology FILE");
            b.topo = sim::load_scenario_file(topology);
            b.net = std::make_unique<sim::Network>(*b.topo);
            b.prober = std::make_unique<sim::SimProber>(*b.net);
        } else {
            if (!topology.empty()) throw UsageError("--topology only applies to --backend sim");
            b.prober = std::make_unique<live::LiveProber>();
        }
        return b;
    }

    std::map<std::string, int> engine_keys() const { return topo ? topo->engine : std::map<std::string, int>{}; }
    Dialect dialect() const {
        return topo ? dialect_from_string(topo->dialect).value_or(Dialect::Tnt) : Dialect::Tnt;
    }
};

void print_stats(const StatsMatrix& m) {
    std::cout << fmt::format("{:<22}", "class");
    for (std::size_t c = 0; c < kRevealColumnCount; ++c)
        std::cout << fmt::format("{:>10}", to_string(static_cast<RevealColumn>(c)));
    std::cout << fmt::format("{:>10}\n", "total");
    for (std::size_t r = 0; r < kTunnelClassCount; ++r) {
        auto cls = static_cast<TunnelClass>(r);
        std::cout << fmt::format("{:<22}", to_string(cls));
        for (std::size_t c = 0; c < kRevealColumnCount; ++c) std::cout << fmt::format("{:>10}", m.counts[r][c]);
        std::cout << fmt::format("{:>10}\n", m.class_total(cls));
    }
    std::cout << fmt::format("{:<22}{:>10}\n", "tunnels", m.total());
    std::cout << fmt::format("{:<22}{:>10}\n", "traces", m.traces);
    const ProbeCounts& p = m.probes;
    std::cout << "probes\n";
    for (auto [name, v] : {std::pair{"original", p.original}, {"revelation", p.revelation}, {"ping", p.ping},
                           {"buddy", p.buddy}, {"total", p.total()}})
        std::cout << fmt::format("  {:<20}{:>10}\n", name, v);
    std::cout << "revelation outcomes\n";
    for (auto [name, v] : {std::pair{"revealed", p.revealed}, {"no_revelation", p.no_revelation},
                           {"target_not_reached", p.target_not_reached}, {"ing_not_found", p.ing_not_found}})
        std::cout << fmt::format("  {:<20}{:>10}\n", name, v);
}

std::pair<int, int> parse_grid(const std::string& g) {
    auto dots = g.find("..");
    if (dots == std::string::npos) throw UsageError("--grid expects LO..HI, got '" + g + "'");
    try {
        int lo = std::stoi(g.substr(0, dots)), hi = std::stoi(g.substr(dots + 2));
        if (lo < 0 || hi > 255 || lo > hi) throw UsageError("--grid range out of order: '" + g + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("--grid expects LO..HI, got '" + g + "'");
    }
}

std::string fmt_rate(std::optional<double> v) { return v ? fmt::format("{:.4f}", *v) : "NA"; }

int run(int argc, char** argv) {
    CLI::App app{"MPLS tunnel detection and revelation traceroute"};
    app.require_subcommand(1);

    EngineFlags eng;
    OutputFlags trace_out, sim_out, campaign_out;

    std::string target_text, backend = "live", topology;
    auto* trace = app.add_subcommand("trace", "trace one target");
    trace->add_option("target", target_text, "IPv4 destination")->required();
    trace->add_option("--backend", backend, "live or sim")->check(CLI::IsMember({"live", "sim"}))->capture_default_str();
    trace->add_option("--topology", topology, "scenario file for --backend sim");
    eng.add(trace);
    trace_out.add(trace);

    std::string scenario, catalog = sim::default_scenario_dir().string();
    bool list = false;
    auto* simulate = app.add_subcommand("simulate", "run a catalog scenario on the simulator");
    simulate->add_option("--scenario", scenario, "scenario name or .scn path");
    simulate->add_option("--catalog", catalog, "scenario directory")->capture_default_str();
    simulate->add_flag("--list", list, "list catalog scenarios");
    eng.add(simulate);
    sim_out.add(simulate);

    std::string targets;
    auto* campaign = app.add_subcommand("campaign", "trace every address of a target list");
    campaign->add_option("--targets", targets, "file with one IPv4 address per line ('-' for stdin)")->required();
    campaign->add_option("--backend", backend, "live or sim")->check(CLI::IsMember({"live", "sim"}))->capture_default_str();
    campaign->add_option("--topology", topology, "scenario file for --backend sim");
    eng.add(campaign);
    campaign_out.add(campaign, "records");

    std::string suite, grid = "0..4";
    NoiseSpec noise;
    bool noisy = false;
    auto* calibrate = app.add_subcommand("calibrate", "ROC sweep of the FRPLA/RTLA thresholds");
    calibrate->add_option("--suite", suite, "directory of .scn scenarios")->required();
    calibrate->add_option("--grid", grid, "threshold range LO..HI")->capture_default_str();
    calibrate->add_flag("--noise", noisy, "inject return-path asymmetry");
    calibrate->add_option("--noise-fraction", noise.fraction, "share of routers with a longer return path")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    calibrate->add_option("--noise-seed", noise.seed, "seed of the noise generator")->capture_default_str();
    calibrate->add_option("--variants", noise.variants, "noisy copies of each scenario")
        ->check(CLI::Range(1, 10000))
        ->capture_default_str();

    std::string records;
    auto* stats = app.add_subcommand("stats", "tunnel class x revelation technique counts");
    stats->add_option("records", records, "record file ('-' for stdin)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (*trace) {
        Ipv4 target = parse_address(target_text);
        Backend b = Backend::make(backend, topology);
        AnnotatedTrace t = trace_naughty_tunnel(target, eng.resolve(b.engine_keys()), *b.prober);
        trace_out.emit(t, b.dialect());
        if (t.truncated) throw ProbeFailure(t.diagnostic);
    } else if (*simulate) {
        if (list) {
            for (auto& p : sim::list_scenarios(catalog)) std::cout << p.stem().string() << '\n';
            return kOk;
        }
        if (scenario.empty()) throw UsageError("simulate needs --scenario NAME or --list");
        auto path = sim::find_scenario(scenario, catalog);
        if (!path) throw sim::ScenarioError("no scenario '" + scenario + "' in " + catalog);
        sim::Topology topo = sim::load_scenario_file(*path);
        if (!topo.target) throw sim::ScenarioError("scenario '" + topo.name + "' has no target");
        AnnotatedTrace t = sim::run_trace(topo, *topo.target, eng.resolve(topo.engine));
        sim_out.emit(t, dialect_from_string(topo.dialect).value_or(Dialect::Tnt));
    } else if (*campaign) {
        std::ifstream f;
        std::istream& in = open_input(targets, f);
        std::vector<Ipv4> list_targets;
        for (std::string line; std::getline(in, line);) {
            std::istringstream ls(line.substr(0, line.find('#')));
            std::string tok;
            if (ls >> tok) list_targets.push_back(parse_address(tok));
        }
        Backend b = Backend::make(backend, topology);
        EngineConfig cfg = eng.resolve(b.engine_keys());
        ProbeCounts total;
        bool failed = false;
        for (Ipv4 target : list_targets) {
            AnnotatedTrace t = trace_naughty_tunnel(target, cfg, *b.prober);
            total += t.probe_counts;
            campaign_out.emit(t, b.dialect());
            failed = failed || t.truncated;
        }
        std::cerr << fmt::format("campaign: {} targets, {} probes ({} original, {} revelation, {} ping, {} buddy)\n",
                                 list_targets.size(), total.total(), total.original, total.revelation, total.ping,
                                 total.buddy);
        if (failed) return kProbing;
    } else if (*calibrate) {
        auto [lo, hi] = parse_grid(grid);
        std::vector<sim::Topology> clean;
        for (auto& p : sim::list_scenarios(suite)) clean.push_back(sim::load_scenario_file(p));
        if (clean.empty()) throw sim::ScenarioError("no .scn files in '" + suite + "'");
        std::vector<sim::Topology> topos = noisy ? noisy_suite(clean, noise) : clean;
        std::vector<RocCase> cases;
        for (auto& t : topos) cases.push_back(prepare_case(t));
        std::cout << "t_rtla,t_frpla,tp,positives,fp,negatives,tpr,fpr\n";
        for (auto& p : roc_sweep(cases, lo, hi))
            std::cout << fmt::format("{},{},{},{},{},{},{},{}\n", p.t_rtla, p.t_frpla, p.true_positives, p.positives,
                                     p.false_positives, p.negatives, fmt_rate(p.tpr()), fmt_rate(p.fpr()));
    } else if (*stats) {
        std::ifstream f;
        std::istream& in = open_input(records, f);
        std::vector<AnnotatedTrace> traces;
        for (std::string line; std::getline(in, line);)
            if (line.find_first_not_of(" \t\r") != std::string::npos) traces.push_back(parse_record(line));
        print_stats(classify_stats(traces));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "tnt: " << e.what() << '\n';
        return kUsage;
    } catch (const ProbeFailure& e) {
        std::cerr << "tnt: probing failed: " << e.what() << '\n';
        return kProbing;
    } catch (const sim::ScenarioError& e) {
        std::cerr << "tnt: scenario error: " << e.what() << '\n';
        return kScenario;
    } catch (const std::invalid_argument& e) {
        std::cerr << "tnt: bad record: " << e.what() << '\n';
        return kScenario;
    }
}
