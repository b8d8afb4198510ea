#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tnt/model.hpp"

namespace tnt::live {

inline constexpr std::uint8_t kIcmpEchoReply = 0;
inline constexpr std::uint8_t kIcmpDestUnreachable = 3;
inline constexpr std::uint8_t kIcmpEchoRequest = 8;
inline constexpr std::uint8_t kIcmpTimeExceeded = 11;
inline constexpr std::uint8_t kMplsExtClass = 1;
inline constexpr std::uint8_t kMplsExtCType = 1;
inline constexpr std::uint16_t kBaseDestPort = 33434;

std::uint16_t inet_checksum(std::span<const std::uint8_t> data);

// IPv4 + UDP probe; the IP id carries the probe tag, ports carry the flow.
std::vector<std::uint8_t> build_udp_probe(Ipv4 src, Ipv4 dst, int ttl, std::uint16_t flow_id, std::uint16_t tag);
// ICMP echo request body (no IP header). With a checksum, two payload bytes are chosen
// so the ICMP checksum stays at that value whatever the sequence number (Paris flow).
std::vector<std::uint8_t> build_echo_request(std::uint16_t ident, std::uint16_t seq,
                                             std::optional<std::uint16_t> checksum = std::nullopt);
std::uint16_t paris_checksum(std::uint16_t flow_id);

struct IcmpReply {
    Ipv4 source;
    int ip_ttl = 0;
    std::uint8_t type = 0;
    std::uint8_t code = 0;
    // Echo reply fields.
    std::uint16_t echo_ident = 0;
    std::uint16_t echo_seq = 0;
    // Quoted datagram fields for error messages.
    std::optional<Ipv4> quoted_dst;
    int quoted_ttl = 0;
    std::uint16_t quoted_ip_id = 0;
    std::uint8_t quoted_protocol = 0;
    // UDP ports, or ICMP identifier and sequence when the quote is an echo request.
    std::uint16_t quoted_sport = 0;
    std::uint16_t quoted_dport = 0;
    std::vector<LabelStackEntry> stack;

    ReplyKind kind() const;
};

// Parses an IPv4 datagram carrying ICMP. Returns nullopt for truncated or non-ICMP input.
std::optional<IcmpReply> parse_icmp_reply(std::span<const std::uint8_t> packet);

// Decodes the ICMP extension structure that follows the quoted datagram.
std::vector<LabelStackEntry> parse_mpls_extension(std::span<const std::uint8_t> ext);

}  // namespace tnt::live
