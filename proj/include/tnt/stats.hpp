#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tnt/model.hpp"

namespace tnt {

enum class TunnelClass { Explicit, ImplicitQttl, ImplicitUturn, Opaque, InvisiblePhpRtla, InvisiblePhpFrpla, InvisibleUhp };
inline constexpr std::size_t kTunnelClassCount = 7;

// Matrix columns; Other collects tunnels whose revelation did not reveal a path.
enum class RevealColumn { Dpr, Brpr, OneHopLsp, Mix, Other };
inline constexpr std::size_t kRevealColumnCount = 5;

std::string_view to_string(TunnelClass c);
std::optional<TunnelClass> tunnel_class_from_string(std::string_view s);
std::string_view to_string(RevealColumn c);
RevealColumn column_of(RevealState s);

struct TunnelObservation {
    TunnelClass cls = TunnelClass::Explicit;
    RevealState state = RevealState::NotAttempted;
    std::size_t first_hop = 0;

    friend bool operator==(const TunnelObservation&, const TunnelObservation&) = default;
};

// Consecutive indicator hops (LSE, QTTL, UTURN) form one tunnel; any LSE makes it Explicit.
// Every trigger-coded hop (LSE_TTL, FRPLA, RTLA, DUP_IP) is a tunnel of its own.
std::vector<TunnelObservation> tunnels_of(const AnnotatedTrace& trace);

struct StatsMatrix {
    std::array<std::array<long, kRevealColumnCount>, kTunnelClassCount> counts{};
    ProbeCounts probes;
    long traces = 0;

    long at(TunnelClass c, RevealColumn r) const {
        return counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    }
    long class_total(TunnelClass c) const;
    long total() const;
    friend bool operator==(const StatsMatrix&, const StatsMatrix&) = default;
};

StatsMatrix classify_stats(const std::vector<AnnotatedTrace>& traces);

}  // namespace tnt
