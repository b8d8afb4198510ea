#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnt/model.hpp"

namespace tnt {

inline constexpr int kRecordSchemaVersion = 1;

enum class Dialect { Tnt, TraceTunnel };

std::optional<Dialect> dialect_from_string(std::string_view s);
std::string_view to_string(Dialect d);

// Per-hop values as printed next to the TTL pair.
struct HopMetrics {
    int frpla = 0;
    int qttl = 1;
    int uturn = 0;
    std::optional<int> rtla;
    int rtla_delta = 0;

    friend bool operator==(const HopMetrics&, const HopMetrics&) = default;
};

std::vector<HopMetrics> trace_metrics(const AnnotatedTrace& trace, Dialect d);
HopMetrics revealed_metrics(const HopRecord& hop, Dialect d);

std::string block_label(Code code, Dialect d);
// Whether a revelation block is printed for this annotation.
bool has_block(const TunnelAnnotation& a);

std::string dump_text(const AnnotatedTrace& trace, Dialect d);

// Compact field lines used by the golden transcript tests.
std::vector<std::string> golden_lines(const AnnotatedTrace& trace, Dialect d);

std::string dump_record(const AnnotatedTrace& trace);
AnnotatedTrace parse_record(std::string_view line);

}  // namespace tnt
