#include "tnt/sim/sim_prober.hpp"

#include <algorithm>

namespace tnt::sim {

ProbeReply SimProber::send(SimPacket p) {
    ++emitted_;
    auto r = net_.exchange(std::move(p));
    ProbeReply out;
    if (!r.got) return out;
    const SimPacket& rp = r.packet;
    out.address = rp.src;
    out.kind = rp.reply_kind;
    int extra = rp.responder >= 0 ? net_.topology().routers[rp.responder].return_extra : 0;
    out.ttl = std::clamp(rp.ip_ttl - extra, 1, 255);
    if (rp.reply_kind != ReplyKind::EchoReply) out.qttl = rp.quoted_ttl;
    out.stack = rp.quoted_stack;
    out.rtt_ms = (rp.links + 2 * std::max(extra, 0)) * kLinkRttMs;
    auto& names = net_.topology().hostnames;
    if (auto it = names.find(rp.src); it != names.end()) out.name = it->second;
    return out;
}

ProbeReply SimProber::trace_probe(Ipv4 target, int ttl, std::uint16_t flow_id) {
    SimPacket p;
    p.dst = target;
    p.ip_ttl = ttl;
    p.kind = PacketKind::Udp;
    p.flow = flow_id;
    return send(p);
}

ProbeReply SimProber::echo(Ipv4 target) {
    SimPacket p;
    p.dst = target;
    p.ip_ttl = 255;
    p.kind = PacketKind::EchoRequest;
    return send(p);
}

ProbeReply SimProber::udp(Ipv4 target) {
    SimPacket p;
    p.dst = target;
    p.ip_ttl = 255;
    p.kind = PacketKind::Udp;
    return send(p);
}

}  // namespace tnt::sim
