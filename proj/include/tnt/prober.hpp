#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnt/model.hpp"

namespace tnt {

struct ProbeReply {
    std::optional<Ipv4> address;
    std::string name;
    ReplyKind kind = ReplyKind::None;
    int ttl = 0;
    std::optional<int> qttl;
    std::vector<LabelStackEntry> stack;
    double rtt_ms = 0.0;

    bool responded() const { return address.has_value(); }
};

struct ProbeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Prober {
public:
    virtual ~Prober() = default;
    // TTL-limited probe of the base trace or of a revelation trace.
    virtual ProbeReply trace_probe(Ipv4 target, int ttl, std::uint16_t flow_id) = 0;
    virtual ProbeReply echo(Ipv4 target) = 0;
    // Full-TTL UDP probe to a high port; answered by destination-unreachable.
    virtual ProbeReply udp(Ipv4 target) = 0;
    virtual long probes_emitted() const = 0;
};

}  // namespace tnt
