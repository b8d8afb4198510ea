#include "tnt/classifier.hpp"

#include <cstdlib>
#include <stdexcept>

#include "tnt/fingerprint.hpp"

namespace tnt {

bool is_junos(const HopRecord& hop) {
    if (!hop.responded() || hop.ttl_te <= 0 || !hop.ttl_er) return false;
    return signature(hop.ttl_te, *hop.ttl_er).brand == Brand::JuniperJunOS;
}

std::optional<int> frpla_value(const HopRecord& hop) {
    if (!hop.responded() || hop.ttl_te <= 0) return std::nullopt;
    return path_len(hop.ttl_te) - hop.probe_ttl;
}

std::optional<int> return_diff(const HopRecord& hop) {
    if (!hop.responded() || hop.ttl_te <= 0 || !hop.ttl_er) return std::nullopt;
    return path_len(hop.ttl_te) - path_len(*hop.ttl_er);
}

IndicatorOutcome check_indicators(const HopRecord* hop, const Thresholds& t) {
    IndicatorOutcome out;
    if (!hop || !hop->responded()) return out;
    if (!hop->lse_stack.empty()) {
        int ttl = hop->lse_stack.front().lse_ttl;
        out.lse_ttl_quoted = ttl;
        if (ttl > t.t_lse_ttl && ttl < 255) {
            out.code = Code::LSE_TTL;
            out.length_estimate = 255 - ttl;
            return out;
        }
        auto f = frpla_value(*hop);
        if (ttl == 255 && f && *f >= t.t_frpla) {
            out.code = Code::LSE_TTL;
            out.length_estimate = *f;
            return out;
        }
        out.code = Code::LSE;
        return out;
    }
    if (hop->qttl && *hop->qttl > 1) {
        out.code = Code::QTTL;
        return out;
    }
    auto diff = return_diff(*hop);
    if (diff && !is_junos(*hop)) {
        out.uturn_value = *diff;
        if (std::abs(*diff) > t.t_uturn) out.code = Code::UTURN;
    }
    return out;
}

Code check_triggers(const HopRecord* prev, const HopRecord* cur, const HopRecord* next, const Thresholds& t) {
    if (!prev || !cur || !prev->responded() || !cur->responded()) return Code::None;
    if (prev->address == cur->address) return Code::None;
    if (next && next->responded() && next->address == cur->address) return Code::DUP_IP;
    if (is_junos(*cur)) {
        auto diff = return_diff(*cur);
        if (diff && *diff >= t.t_rtla) return Code::RTLA;
    }
    auto f = frpla_value(*cur);
    if (f && *f >= t.t_frpla) return Code::FRPLA;
    return Code::None;
}

std::optional<int> trigger_length_estimate(Code code, const HopRecord& cur, const Thresholds& t) {
    switch (code) {
        case Code::FRPLA:
        case Code::DUP_IP: return frpla_value(cur);
        case Code::RTLA: return return_diff(cur);
        case Code::LSE_TTL: return check_indicators(&cur, t).length_estimate;
        default: return std::nullopt;
    }
}

int uturn_expected(int lsp_length, int position) {
    if (lsp_length < 1 || position < 1 || position > lsp_length)
        throw std::out_of_range("uturn_expected: position outside LSP");
    return 2 * (lsp_length - position + 1);
}

}  // namespace tnt
