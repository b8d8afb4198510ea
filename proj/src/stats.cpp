#include "tnt/stats.hpp"

#include <algorithm>
#include <numeric>

namespace tnt {

namespace {

constexpr std::array<std::string_view, kTunnelClassCount> kClassNames = {
    "explicit", "implicit-qttl", "implicit-uturn", "opaque", "invisible-php-rtla", "invisible-php-frpla", "invisible-uhp"};

constexpr std::array<std::string_view, kRevealColumnCount> kColumnNames = {"DPR", "BRPR", "1HOP_LSP", "MIX", "other"};

std::optional<TunnelClass> trigger_class(Code c) {
    switch (c) {
        case Code::LSE_TTL: return TunnelClass::Opaque;
        case Code::FRPLA: return TunnelClass::InvisiblePhpFrpla;
        case Code::RTLA: return TunnelClass::InvisiblePhpRtla;
        case Code::DUP_IP: return TunnelClass::InvisibleUhp;
        default: return std::nullopt;
    }
}

int indicator_rank(Code c) {
    switch (c) {
        case Code::LSE: return 3;
        case Code::QTTL: return 2;
        case Code::UTURN: return 1;
        default: return 0;
    }
}

TunnelClass indicator_class(int rank) {
    if (rank == 3) return TunnelClass::Explicit;
    if (rank == 2) return TunnelClass::ImplicitQttl;
    return TunnelClass::ImplicitUturn;
}

}  // namespace

std::string_view to_string(TunnelClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<TunnelClass> tunnel_class_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i)
        if (kClassNames[i] == s) return static_cast<TunnelClass>(i);
    return std::nullopt;
}

std::string_view to_string(RevealColumn c) { return kColumnNames[static_cast<std::size_t>(c)]; }

RevealColumn column_of(RevealState s) {
    switch (s) {
        case RevealState::Dpr: return RevealColumn::Dpr;
        case RevealState::Brpr: return RevealColumn::Brpr;
        case RevealState::OneHopLsp: return RevealColumn::OneHopLsp;
        case RevealState::Mix: return RevealColumn::Mix;
        default: return RevealColumn::Other;
    }
}

std::vector<TunnelObservation> tunnels_of(const AnnotatedTrace& trace) {
    std::vector<TunnelObservation> out;
    int run_rank = 0;
    for (std::size_t i = 0; i < trace.hops.size(); ++i) {
        const TunnelAnnotation& a = trace.hops[i].annotation;
        if (auto c = trigger_class(a.code)) {
            out.push_back({*c, a.state, i});
            run_rank = 0;
            continue;
        }
        int rank = indicator_rank(a.code);
        if (rank == 0) {
            run_rank = 0;
            continue;
        }
        if (run_rank == 0) out.push_back({indicator_class(rank), RevealState::NotAttempted, i});
        run_rank = std::max(run_rank, rank);
        out.back().cls = indicator_class(run_rank);
    }
    return out;
}

long StatsMatrix::class_total(TunnelClass c) const {
    const auto& row = counts[static_cast<std::size_t>(c)];
    return std::accumulate(row.begin(), row.end(), 0L);
}

long StatsMatrix::total() const {
    long n = 0;
    for (std::size_t c = 0; c < kTunnelClassCount; ++c) n += class_total(static_cast<TunnelClass>(c));
    return n;
}

StatsMatrix classify_stats(const std::vector<AnnotatedTrace>& traces) {
    StatsMatrix m;
    for (const auto& t : traces) {
        ++m.traces;
        m.probes += t.probe_counts;
        for (const auto& obs : tunnels_of(t))
            ++m.counts[static_cast<std::size_t>(obs.cls)][static_cast<std::size_t>(column_of(obs.state))];
    }
    return m;
}

}  // namespace tnt
