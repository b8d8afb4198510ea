#pragma once

#include <optional>

#include "tnt/model.hpp"

namespace tnt {

struct IndicatorOutcome {
    Code code = Code::None;
    std::optional<int> uturn_value;
    std::optional<int> lse_ttl_quoted;
    std::optional<int> length_estimate;
};

bool is_junos(const HopRecord& hop);

// L_TE - L_T, defined for any responding hop.
std::optional<int> frpla_value(const HopRecord& hop);
// L_TE - L_ER, defined when the hop answered the ping.
std::optional<int> return_diff(const HopRecord& hop);

IndicatorOutcome check_indicators(const HopRecord* hop, const Thresholds& t);
Code check_triggers(const HopRecord* prev, const HopRecord* cur, const HopRecord* next, const Thresholds& t);

std::optional<int> trigger_length_estimate(Code code, const HopRecord& cur, const Thresholds& t);

int uturn_expected(int lsp_length, int position);

}  // namespace tnt
