#include "tnt/report.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <json.hpp>
#include <stdexcept>

#include "tnt/classifier.hpp"
#include "tnt/stats.hpp"

namespace tnt {

using nlohmann::json;

std::optional<Dialect> dialect_from_string(std::string_view s) {
    if (s == "tnt") return Dialect::Tnt;
    if (s == "tracetunnel") return Dialect::TraceTunnel;
    return std::nullopt;
}

std::string_view to_string(Dialect d) { return d == Dialect::Tnt ? "tnt" : "tracetunnel"; }

std::vector<HopMetrics> trace_metrics(const AnnotatedTrace& trace, Dialect d) {
    std::vector<HopMetrics> out;
    std::optional<int> prev_raw;
    int prev_rtla = 0;
    for (const auto& th : trace.hops) {
        const HopRecord& h = th.hop;
        HopMetrics m;
        if (!h.responded()) {
            out.push_back(m);
            prev_raw.reset();
            prev_rtla = 0;
            continue;
        }
        m.frpla = frpla_value(h).value_or(0);
        m.qttl = h.qttl.value_or(1);
        auto raw = return_diff(h);
        int shown = raw.value_or(0);
        if (d == Dialect::TraceTunnel && raw && prev_raw && *raw < *prev_raw) shown = 0;
        m.uturn = shown;
        if (is_junos(h)) {
            bool visible = d == Dialect::TraceTunnel || (h.lse_stack.empty() && raw && *raw != 0);
            if (visible) m.rtla = shown;
            m.rtla_delta = raw.value_or(0) - prev_rtla;
            prev_rtla = raw.value_or(0);
        } else {
            prev_rtla = 0;
        }
        prev_raw = raw;
        out.push_back(m);
    }
    return out;
}

HopMetrics revealed_metrics(const HopRecord& hop, Dialect d) {
    HopMetrics m;
    m.qttl = hop.qttl.value_or(1);
    if (d == Dialect::TraceTunnel && is_junos(hop)) m.rtla = 0;
    return m;
}

std::string block_label(Code code, Dialect d) {
    switch (code) {
        case Code::FRPLA: return "FRPLA";
        case Code::RTLA: return d == Dialect::Tnt ? "RTLA" : "RTL";
        case Code::LSE_TTL: return "OPAQUE";
        case Code::DUP_IP: return "Duplicate IP";
        default: return std::string(to_string(code));
    }
}

bool has_block(const TunnelAnnotation& a) { return a.state != RevealState::NotAttempted; }

namespace {

std::string ttl_pair(const HopRecord& h) {
    return fmt::format("<{},{}>", h.ttl_te, h.ttl_er ? std::to_string(*h.ttl_er) : "*");
}

std::string metrics_text(const HopMetrics& m, Dialect d) {
    if (d == Dialect::Tnt) {
        std::string s = fmt::format("[frpla = {}]", m.frpla);
        if (m.rtla) s += fmt::format("[rtl = {}({})]", *m.rtla, m.rtla_delta);
        return s + fmt::format("[qttl = {}][uturn = {}]", m.qttl, m.uturn);
    }
    std::string s = fmt::format("[ frpla = {} ]", m.frpla);
    if (m.rtla) s += fmt::format("[ rtla = {}({}) ]", *m.rtla, m.rtla_delta);
    return s + fmt::format("[ qttl = {} ][ uturn = {} ]", m.qttl, m.uturn);
}

std::string lse_text(const std::vector<LabelStackEntry>& stack, Dialect d) {
    std::string s;
    for (auto& e : stack) {
        if (d == Dialect::Tnt)
            s += fmt::format("[MPLS LSE | Label : {} | LSE-TTL : {}]", e.label, e.lse_ttl);
        else
            s += fmt::format("[MPLS LSE | Label : {} | mTTL : {} ]", e.label, e.lse_ttl);
    }
    return s;
}

std::string who(const HopRecord& h) {
    std::string a = h.address->str();
    return fmt::format("{} ({})", h.name.empty() ? a : h.name, a);
}

}  // namespace

std::string dump_text(const AnnotatedTrace& trace, Dialect d) {
    std::string out = fmt::format("Launching {}: {} ({})\n\n", d == Dialect::Tnt ? "TNT" : "TraceTunnel",
                                  trace.target.str(), trace.target.str());
    auto metrics = trace_metrics(trace, d);
    for (std::size_t i = 0; i < trace.hops.size(); ++i) {
        const HopRecord& h = trace.hops[i].hop;
        const TunnelAnnotation& a = trace.hops[i].annotation;
        if (has_block(a) && i > 0) {
            int base = trace.hops[i - 1].hop.probe_ttl;
            std::string le = a.length_estimate ? std::to_string(*a.length_estimate) : "-";
            int diff = a.length_estimate ? std::abs(*a.length_estimate - int(a.revealed.size())) : 0;
            out += fmt::format("    {} | Length estimation : {} | Revealed : {} (difference : {})\n",
                               block_label(a.code, d), le, a.revealed.size(), diff);
            for (std::size_t k = 0; k < a.revealed.size(); ++k) {
                const RevealedHop& r = a.revealed[k];
                out += fmt::format("     {}.{} [REVEALED] {}  {} {} {:.3f} ms  - step {}{}\n", base, k + 1,
                                   who(r.hop), ttl_pair(r.hop), metrics_text(revealed_metrics(r.hop, d), d),
                                   r.hop.rtt_ms, r.step, r.buddy_used ? "  (Buddy used)" : "");
            }
            out += "\n";
        }
        if (!h.responded()) {
            out += fmt::format("  {}  *\n", h.probe_ttl);
            continue;
        }
        out += fmt::format("  {}  {}  {} {}{} {:.3f} ms\n", h.probe_ttl, who(h), ttl_pair(h),
                           metrics_text(metrics[i], d), lse_text(h.lse_stack, d), h.rtt_ms);
    }
    if (trace.truncated) out += fmt::format("  (truncated: {})\n", trace.diagnostic);
    return out;
}

std::vector<std::string> golden_lines(const AnnotatedTrace& trace, Dialect d) {
    std::vector<std::string> out;
    auto metrics = trace_metrics(trace, d);
    for (std::size_t i = 0; i < trace.hops.size(); ++i) {
        const HopRecord& h = trace.hops[i].hop;
        const TunnelAnnotation& a = trace.hops[i].annotation;
        if (has_block(a)) {
            out.push_back(fmt::format("block {} state={} le={} revealed={}", to_string(a.code), to_string(a.state),
                                      a.length_estimate ? std::to_string(*a.length_estimate) : "-",
                                      a.revealed.size()));
            for (auto& r : a.revealed)
                out.push_back(fmt::format("rev {} {} step={}{}", r.hop.address->str(), ttl_pair(r.hop), r.step,
                                          r.buddy_used ? " buddy" : ""));
        }
        if (!h.responded()) {
            out.push_back(fmt::format("hop {} *", h.probe_ttl));
            continue;
        }
        const HopMetrics& m = metrics[i];
        std::string line = fmt::format("hop {} {} {} frpla={} qttl={} uturn={}", h.probe_ttl, h.address->str(),
                                       ttl_pair(h), m.frpla, m.qttl, m.uturn);
        if (m.rtla) line += fmt::format(" rtla={}", *m.rtla);
        for (auto& e : h.lse_stack) line += fmt::format(" lse={}:{}", e.label, e.lse_ttl);
        out.push_back(line);
    }
    for (const auto& t : tunnels_of(trace)) out.push_back(fmt::format("tunnel {} {}", to_string(t.cls), to_string(t.state)));
    return out;
}

namespace {

json hop_json(const HopRecord& h) {
    json j;
    j["probe_ttl"] = h.probe_ttl;
    j["address"] = h.address ? json(h.address->str()) : json(nullptr);
    j["name"] = h.name;
    j["kind"] = to_string(h.kind);
    j["ttl_te"] = h.ttl_te;
    j["ttl_er"] = h.ttl_er ? json(*h.ttl_er) : json(nullptr);
    j["qttl"] = h.qttl ? json(*h.qttl) : json(nullptr);
    json lse = json::array();
    for (auto& e : h.lse_stack)
        lse.push_back({{"label", e.label}, {"tc", e.traffic_class}, {"s", e.bottom_of_stack}, {"ttl", e.lse_ttl}});
    j["lse"] = lse;
    j["rtt_ms"] = h.rtt_ms;
    return j;
}

template <class T>
std::optional<T> opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

HopRecord hop_from(const json& j) {
    HopRecord h;
    h.probe_ttl = j.at("probe_ttl").get<int>();
    if (auto a = opt<std::string>(j, "address")) {
        h.address = Ipv4::parse(*a);
        if (!h.address) throw std::invalid_argument("bad address in record: " + *a);
    }
    h.name = j.value("name", "");
    auto kind = reply_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("bad reply kind in record");
    h.kind = *kind;
    h.ttl_te = j.at("ttl_te").get<int>();
    h.ttl_er = opt<int>(j, "ttl_er");
    h.qttl = opt<int>(j, "qttl");
    for (auto& e : j.at("lse"))
        h.lse_stack.push_back(LabelStackEntry{e.at("label").get<std::uint32_t>(), e.at("tc").get<std::uint8_t>(),
                                              e.at("s").get<bool>(), e.at("ttl").get<std::uint8_t>()});
    h.rtt_ms = j.at("rtt_ms").get<double>();
    return h;
}

}  // namespace

std::string dump_record(const AnnotatedTrace& t) {
    json j;
    j["schema_version"] = kRecordSchemaVersion;
    j["target"] = t.target.str();
    j["flow_id"] = t.flow_id;
    j["truncated"] = t.truncated;
    j["diagnostic"] = t.diagnostic;
    const ProbeCounts& c = t.probe_counts;
    j["probe_counts"] = {{"original", c.original},
                         {"revelation", c.revelation},
                         {"ping", c.ping},
                         {"buddy", c.buddy},
                         {"revealed", c.revealed},
                         {"no_revelation", c.no_revelation},
                         {"target_not_reached", c.target_not_reached},
                         {"ing_not_found", c.ing_not_found}};
    json hops = json::array();
    for (auto& th : t.hops) {
        json h = hop_json(th.hop);
        const TunnelAnnotation& a = th.annotation;
        json rev = json::array();
        for (auto& r : a.revealed) rev.push_back({{"hop", hop_json(r.hop)}, {"step", r.step}, {"buddy", r.buddy_used}});
        h["annotation"] = {{"code", to_string(a.code)},
                           {"state", to_string(a.state)},
                           {"length_estimate", a.length_estimate ? json(*a.length_estimate) : json(nullptr)},
                           {"revealed", rev}};
        hops.push_back(h);
    }
    j["hops"] = hops;
    return j.dump();
}

AnnotatedTrace parse_record(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed record: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kRecordSchemaVersion)
            throw std::invalid_argument("unsupported record schema_version");
        AnnotatedTrace t;
        auto target = Ipv4::parse(j.at("target").get<std::string>());
        if (!target) throw std::invalid_argument("bad target in record");
        t.target = *target;
        t.flow_id = j.at("flow_id").get<std::uint16_t>();
        t.truncated = j.at("truncated").get<bool>();
        t.diagnostic = j.at("diagnostic").get<std::string>();
        const json& c = j.at("probe_counts");
        ProbeCounts& pc = t.probe_counts;
        pc.original = c.at("original").get<long>();
        pc.revelation = c.at("revelation").get<long>();
        pc.ping = c.at("ping").get<long>();
        pc.buddy = c.at("buddy").get<long>();
        pc.revealed = c.at("revealed").get<long>();
        pc.no_revelation = c.at("no_revelation").get<long>();
        pc.target_not_reached = c.at("target_not_reached").get<long>();
        pc.ing_not_found = c.at("ing_not_found").get<long>();
        for (auto& hj : j.at("hops")) {
            TraceHop th;
            th.hop = hop_from(hj);
            const json& a = hj.at("annotation");
            auto code = code_from_string(a.at("code").get<std::string>());
            auto state = state_from_string(a.at("state").get<std::string>());
            if (!code || !state) throw std::invalid_argument("bad annotation in record");
            th.annotation.code = *code;
            th.annotation.state = *state;
            th.annotation.length_estimate = opt<int>(a, "length_estimate");
            for (auto& r : a.at("revealed"))
                th.annotation.revealed.push_back(
                    RevealedHop{hop_from(r.at("hop")), r.at("step").get<int>(), r.at("buddy").get<bool>()});
            t.hops.push_back(std::move(th));
        }
        return t;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed record: ") + e.what());
    }
}

}  // namespace tnt
