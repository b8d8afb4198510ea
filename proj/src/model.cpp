#include "tnt/model.hpp"

#include <array>
#include <utility>

namespace tnt {

LabelMeaning reserved_label_meaning(std::uint32_t label) {
    switch (label) {
        case kExplicitNullV4: return LabelMeaning::ExplicitNullV4;
        case kRouterAlert: return LabelMeaning::RouterAlert;
        case kExplicitNullV6: return LabelMeaning::ExplicitNullV6;
        case kImplicitNull: return LabelMeaning::ImplicitNull;
        default: return LabelMeaning::Ordinary;
    }
}

ProbeCounts& ProbeCounts::operator+=(const ProbeCounts& o) {
    original += o.original;
    revelation += o.revelation;
    ping += o.ping;
    buddy += o.buddy;
    revealed += o.revealed;
    no_revelation += o.no_revelation;
    target_not_reached += o.target_not_reached;
    ing_not_found += o.ing_not_found;
    return *this;
}

namespace {

constexpr std::array<std::pair<Code, std::string_view>, 8> kCodes{{
    {Code::None, "NONE"},
    {Code::LSE, "LSE"},
    {Code::QTTL, "QTTL"},
    {Code::UTURN, "UTURN"},
    {Code::LSE_TTL, "LSE_TTL"},
    {Code::FRPLA, "FRPLA"},
    {Code::RTLA, "RTLA"},
    {Code::DUP_IP, "DUP_IP"},
}};

constexpr std::array<std::pair<RevealState, std::string_view>, 8> kStates{{
    {RevealState::NotAttempted, "NotAttempted"},
    {RevealState::TargetNotReached, "TargetNotReached"},
    {RevealState::IngNotFound, "IngNotFound"},
    {RevealState::Dpr, "Dpr"},
    {RevealState::Brpr, "Brpr"},
    {RevealState::NothingToReveal, "NothingToReveal"},
    {RevealState::OneHopLsp, "OneHopLsp"},
    {RevealState::Mix, "Mix"},
}};

constexpr std::array<std::pair<ReplyKind, std::string_view>, 4> kKinds{{
    {ReplyKind::None, "none"},
    {ReplyKind::TimeExceeded, "time_exceeded"},
    {ReplyKind::DestUnreachable, "dest_unreachable"},
    {ReplyKind::EchoReply, "echo_reply"},
}};

template <typename E, std::size_t N>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
    for (auto& [e, s] : table)
        if (e == v) return s;
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> reverse(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
    for (auto& [e, name] : table)
        if (name == s) return e;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Code c) { return lookup(kCodes, c); }
std::string_view to_string(RevealState s) { return lookup(kStates, s); }
std::string_view to_string(ReplyKind k) { return lookup(kKinds, k); }

std::string_view to_string(Brand b) {
    switch (b) {
        case Brand::CiscoLike: return "CiscoLike";
        case Brand::JuniperJunOS: return "JuniperJunOS";
        case Brand::JuniperJunosE: return "JuniperJunosE";
        case Brand::UnixLike: return "UnixLike";
        case Brand::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<Code> code_from_string(std::string_view s) { return reverse(kCodes, s); }
std::optional<RevealState> state_from_string(std::string_view s) { return reverse(kStates, s); }
std::optional<ReplyKind> reply_kind_from_string(std::string_view s) { return reverse(kKinds, s); }

bool is_revealed_state(RevealState s) {
    return s == RevealState::Dpr || s == RevealState::Brpr || s == RevealState::OneHopLsp || s == RevealState::Mix;
}

}  // namespace tnt
