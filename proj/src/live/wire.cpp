#include "tnt/live/wire.hpp"

namespace tnt::live {

namespace {

std::uint16_t be16(std::span<const std::uint8_t> d, std::size_t off) {
    return std::uint16_t((d[off] << 8) | d[off + 1]);
}

std::uint32_t be32(std::span<const std::uint8_t> d, std::size_t off) {
    return (std::uint32_t(d[off]) << 24) | (std::uint32_t(d[off + 1]) << 16) | (std::uint32_t(d[off + 2]) << 8) |
           d[off + 3];
}

void put16(std::vector<std::uint8_t>& d, std::size_t off, std::uint16_t v) {
    d[off] = std::uint8_t(v >> 8);
    d[off + 1] = std::uint8_t(v);
}

void put32(std::vector<std::uint8_t>& d, std::size_t off, std::uint32_t v) {
    put16(d, off, std::uint16_t(v >> 16));
    put16(d, off + 2, std::uint16_t(v));
}

constexpr std::size_t kQuoteMinimum = 128;

}  // namespace

std::uint16_t inet_checksum(std::span<const std::uint8_t> data) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < data.size(); i += 2) sum += be16(data, i);
    if (data.size() % 2) sum += std::uint32_t(data.back()) << 8;
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return std::uint16_t(~sum);
}

std::vector<std::uint8_t> build_udp_probe(Ipv4 src, Ipv4 dst, int ttl, std::uint16_t flow_id, std::uint16_t tag) {
    constexpr std::size_t kPayload = 12;
    std::vector<std::uint8_t> p(20 + 8 + kPayload, 0);
    p[0] = 0x45;
    put16(p, 2, std::uint16_t(p.size()));
    put16(p, 4, tag);
    p[8] = std::uint8_t(ttl);
    p[9] = 17;
    put32(p, 12, src.value);
    put32(p, 16, dst.value);
    put16(p, 10, inet_checksum({p.data(), 20}));

    put16(p, 20, flow_id);
    put16(p, 22, kBaseDestPort);
    put16(p, 24, std::uint16_t(8 + kPayload));
    std::vector<std::uint8_t> pseudo(12 + 8 + kPayload, 0);
    put32(pseudo, 0, src.value);
    put32(pseudo, 4, dst.value);
    pseudo[9] = 17;
    put16(pseudo, 10, std::uint16_t(8 + kPayload));
    std::copy(p.begin() + 20, p.end(), pseudo.begin() + 12);
    std::uint16_t c = inet_checksum(pseudo);
    put16(p, 26, c == 0 ? 0xffff : c);
    return p;
}

std::uint16_t paris_checksum(std::uint16_t flow_id) { return std::uint16_t(~flow_id); }

std::vector<std::uint8_t> build_echo_request(std::uint16_t ident, std::uint16_t seq,
                                             std::optional<std::uint16_t> checksum) {
    std::vector<std::uint8_t> p(8 + 8, 0);
    p[0] = kIcmpEchoRequest;
    put16(p, 4, ident);
    put16(p, 6, seq);
    if (checksum) {
        std::uint32_t w = std::uint32_t(std::uint16_t(~*checksum)) + inet_checksum(p);
        w = (w & 0xffff) + (w >> 16);
        put16(p, 8, std::uint16_t(w));
    }
    put16(p, 2, inet_checksum(p));
    return p;
}

ReplyKind IcmpReply::kind() const {
    switch (type) {
        case kIcmpTimeExceeded: return ReplyKind::TimeExceeded;
        case kIcmpDestUnreachable: return ReplyKind::DestUnreachable;
        case kIcmpEchoReply: return ReplyKind::EchoReply;
        default: return ReplyKind::None;
    }
}

std::vector<LabelStackEntry> parse_mpls_extension(std::span<const std::uint8_t> ext) {
    std::vector<LabelStackEntry> out;
    if (ext.size() < 4 || (ext[0] >> 4) != 2) return out;
    std::size_t off = 4;
    while (off + 4 <= ext.size()) {
        std::uint16_t len = be16(ext, off);
        if (len < 4 || off + len > ext.size()) break;
        if (ext[off + 2] == kMplsExtClass && ext[off + 3] == kMplsExtCType) {
            for (std::size_t e = off + 4; e + 4 <= off + len; e += 4) {
                std::uint32_t w = be32(ext, e);
                LabelStackEntry l;
                l.label = w >> 12;
                l.traffic_class = std::uint8_t((w >> 9) & 7);
                l.bottom_of_stack = (w >> 8) & 1;
                l.lse_ttl = std::uint8_t(w & 0xff);
                out.push_back(l);
            }
        }
        off += len;
    }
    return out;
}

std::optional<IcmpReply> parse_icmp_reply(std::span<const std::uint8_t> pkt) {
    if (pkt.size() < 20 || (pkt[0] >> 4) != 4 || pkt[9] != 1) return std::nullopt;
    std::size_t ihl = std::size_t(pkt[0] & 0x0f) * 4;
    std::size_t total = std::min<std::size_t>(be16(pkt, 2), pkt.size());
    if (ihl < 20 || total < ihl + 8) return std::nullopt;
    IcmpReply r;
    r.source = Ipv4(be32(pkt, 12));
    r.ip_ttl = pkt[8];
    auto icmp = pkt.subspan(ihl, total - ihl);
    r.type = icmp[0];
    r.code = icmp[1];
    if (r.type == kIcmpEchoReply) {
        r.echo_ident = be16(icmp, 4);
        r.echo_seq = be16(icmp, 6);
        return r;
    }
    if (r.type != kIcmpTimeExceeded && r.type != kIcmpDestUnreachable) return r;

    auto quote = icmp.subspan(8);
    if (quote.size() < 20 || (quote[0] >> 4) != 4) return r;
    std::size_t qihl = std::size_t(quote[0] & 0x0f) * 4;
    r.quoted_ip_id = be16(quote, 4);
    r.quoted_ttl = quote[8];
    r.quoted_dst = Ipv4(be32(quote, 16));
    r.quoted_protocol = quote[9];
    if (r.quoted_protocol == 1 && quote.size() >= qihl + 8) {
        r.quoted_sport = be16(quote, qihl + 4);
        r.quoted_dport = be16(quote, qihl + 6);
    } else if (quote.size() >= qihl + 4) {
        r.quoted_sport = be16(quote, qihl);
        r.quoted_dport = be16(quote, qihl + 2);
    }
    // RFC 4884 length field counts 32-bit words of the original datagram.
    std::size_t quoted_len = std::size_t(icmp[5]) * 4;
    if (quoted_len == 0 && quote.size() > kQuoteMinimum) quoted_len = kQuoteMinimum;
    if (quoted_len >= kQuoteMinimum && quote.size() > quoted_len) r.stack = parse_mpls_extension(quote.subspan(quoted_len));
    return r;
}

}  // namespace tnt::live
