#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnt/ipv4.hpp"

namespace tnt {

inline constexpr std::uint32_t kMaxLabel = (1u << 20) - 1;
inline constexpr std::uint32_t kExplicitNullV4 = 0;
inline constexpr std::uint32_t kRouterAlert = 1;
inline constexpr std::uint32_t kExplicitNullV6 = 2;
inline constexpr std::uint32_t kImplicitNull = 3;

struct LabelStackEntry {
    std::uint32_t label = 0;
    std::uint8_t traffic_class = 0;
    bool bottom_of_stack = true;
    std::uint8_t lse_ttl = 0;

    friend bool operator==(const LabelStackEntry&, const LabelStackEntry&) = default;
};

enum class LabelMeaning { ExplicitNullV4, RouterAlert, ExplicitNullV6, ImplicitNull, Ordinary };

LabelMeaning reserved_label_meaning(std::uint32_t label);

enum class Brand { CiscoLike, JuniperJunOS, JuniperJunosE, UnixLike, Unknown };

struct RouterSignature {
    int te_initial_ttl = 0;
    int er_initial_ttl = 0;
    Brand brand = Brand::Unknown;

    friend bool operator==(const RouterSignature&, const RouterSignature&) = default;
};

enum class ReplyKind { None, TimeExceeded, DestUnreachable, EchoReply };

// Codes are ordered by reliability, lowest first.
enum class Code { None = 0, LSE = 1, QTTL = 2, UTURN = 3, LSE_TTL = 4, FRPLA = 5, RTLA = 6, DUP_IP = 7 };

enum class RevealState { NotAttempted, TargetNotReached, IngNotFound, Dpr, Brpr, NothingToReveal, OneHopLsp, Mix };

struct HopRecord {
    int probe_ttl = 0;
    std::optional<Ipv4> address;
    std::string name;
    ReplyKind kind = ReplyKind::None;
    int ttl_te = 0;
    std::optional<int> ttl_er;
    std::optional<int> qttl;
    std::vector<LabelStackEntry> lse_stack;
    double rtt_ms = 0.0;

    bool responded() const { return address.has_value(); }
    friend bool operator==(const HopRecord&, const HopRecord&) = default;
};

struct RevealedHop {
    HopRecord hop;
    int step = 0;
    bool buddy_used = false;

    friend bool operator==(const RevealedHop&, const RevealedHop&) = default;
};

struct TunnelAnnotation {
    Code code = Code::None;
    RevealState state = RevealState::NotAttempted;
    std::vector<RevealedHop> revealed;
    std::optional<int> length_estimate;

    friend bool operator==(const TunnelAnnotation&, const TunnelAnnotation&) = default;
};

struct Thresholds {
    int t_lse_ttl = 236;
    int t_uturn = 0;
    int uturn_pair_min = 3;
    int t_rtla = 1;
    int t_frpla = 3;

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct ProbeCounts {
    long original = 0;
    long revelation = 0;
    long ping = 0;
    long buddy = 0;

    long revealed = 0;
    long no_revelation = 0;
    long target_not_reached = 0;
    long ing_not_found = 0;

    long total() const { return original + revelation + ping + buddy; }
    long outcome_total() const { return revealed + no_revelation + target_not_reached + ing_not_found; }
    ProbeCounts& operator+=(const ProbeCounts& o);
    friend bool operator==(const ProbeCounts&, const ProbeCounts&) = default;
};

struct TraceHop {
    HopRecord hop;
    TunnelAnnotation annotation;

    friend bool operator==(const TraceHop&, const TraceHop&) = default;
};

struct AnnotatedTrace {
    Ipv4 target;
    std::uint16_t flow_id = 0;
    std::vector<TraceHop> hops;
    ProbeCounts probe_counts;
    bool truncated = false;
    std::string diagnostic;

    friend bool operator==(const AnnotatedTrace&, const AnnotatedTrace&) = default;
};

std::string_view to_string(Code c);
std::string_view to_string(RevealState s);
std::string_view to_string(Brand b);
std::string_view to_string(ReplyKind k);
std::optional<Code> code_from_string(std::string_view s);
std::optional<RevealState> state_from_string(std::string_view s);
std::optional<ReplyKind> reply_kind_from_string(std::string_view s);

bool is_revealed_state(RevealState s);

}  // namespace tnt
