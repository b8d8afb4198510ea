#include "tnt/live/live_prober.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <string>
#include <thread>

namespace tnt::live {

namespace {

sockaddr_in to_sockaddr(Ipv4 a, std::uint16_t port = 0) {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    sa.sin_addr.s_addr = htonl(a.value);
    return sa;
}

[[noreturn]] void fail(const std::string& what) { throw ProbeFailure(what + ": " + std::strerror(errno)); }

}  // namespace

LiveProber::LiveProber(LiveOptions opts) : opts_(opts) {
    if (opts_.echo_ident == 0) opts_.echo_ident = std::uint16_t(::getpid());
    send_fd_ = ::socket(AF_INET, SOCK_RAW, IPPROTO_RAW);
    if (send_fd_ < 0) fail("raw send socket");
    icmp_fd_ = ::socket(AF_INET, SOCK_RAW, IPPROTO_ICMP);
    if (icmp_fd_ < 0) {
        ::close(send_fd_);
        fail("raw icmp socket");
    }
}

LiveProber::~LiveProber() {
    if (send_fd_ >= 0) ::close(send_fd_);
    if (icmp_fd_ >= 0) ::close(icmp_fd_);
}

Ipv4 LiveProber::source_for(Ipv4 target) const {
    int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd < 0) fail("route lookup socket");
    sockaddr_in sa = to_sockaddr(target, kBaseDestPort);
    sockaddr_in local{};
    socklen_t len = sizeof local;
    bool ok = ::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) == 0 &&
              ::getsockname(fd, reinterpret_cast<sockaddr*>(&local), &len) == 0;
    ::close(fd);
    if (!ok) fail("no route to " + target.str());
    return Ipv4(ntohl(local.sin_addr.s_addr));
}

void LiveProber::pace() {
    auto next = last_send_ + opts_.spacing;
    if (Clock::now() < next) std::this_thread::sleep_until(next);
    last_send_ = Clock::now();
    ++emitted_;
}

void LiveProber::send_icmp(Ipv4 target, int ttl, const std::vector<std::uint8_t>& body) {
    if (::setsockopt(icmp_fd_, IPPROTO_IP, IP_TTL, &ttl, sizeof ttl) < 0) fail("set ttl");
    pace();
    sockaddr_in sa = to_sockaddr(target);
    if (::sendto(icmp_fd_, body.data(), body.size(), 0, reinterpret_cast<sockaddr*>(&sa), sizeof sa) < 0)
        fail("sendto " + target.str());
}

void LiveProber::send_raw(Ipv4 target, const std::vector<std::uint8_t>& datagram) {
    pace();
    sockaddr_in sa = to_sockaddr(target);
    if (::sendto(send_fd_, datagram.data(), datagram.size(), 0, reinterpret_cast<sockaddr*>(&sa), sizeof sa) < 0)
        fail("sendto " + target.str());
}

ProbeReply LiveProber::await(const Match& match, Clock::time_point sent) {
    auto deadline = sent + opts_.timeout;
    std::array<std::uint8_t, 2048> buf{};
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
        if (left <= 0) return {};
        pollfd pfd{icmp_fd_, POLLIN, 0};
        int n = ::poll(&pfd, 1, int(left));
        if (n < 0 && errno != EINTR) fail("poll");
        if (n <= 0) continue;
        ssize_t got = ::recv(icmp_fd_, buf.data(), buf.size(), 0);
        if (got < 0) continue;
        auto r = parse_icmp_reply({buf.data(), std::size_t(got)});
        if (!r || !match(*r)) continue;
        ProbeReply out;
        out.address = r->source;
        out.kind = r->kind();
        out.ttl = r->ip_ttl;
        if (r->kind() != ReplyKind::EchoReply) out.qttl = r->quoted_ttl;
        out.stack = r->stack;
        out.rtt_ms = std::chrono::duration<double, std::milli>(Clock::now() - sent).count();
        return out;
    }
}

ProbeReply LiveProber::trace_probe(Ipv4 target, int ttl, std::uint16_t flow_id) {
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
        std::uint16_t seq = next_tag_++;
        send_icmp(target, ttl, build_echo_request(flow_id, seq, paris_checksum(flow_id)));
        auto sent = Clock::now();
        ProbeReply r = await(
            [&](const IcmpReply& m) {
                if (m.kind() == ReplyKind::EchoReply) return m.source == target && m.echo_ident == flow_id && m.echo_seq == seq;
                return m.kind() != ReplyKind::None && m.quoted_protocol == 1 && m.quoted_dst == target &&
                       m.quoted_sport == flow_id && m.quoted_dport == seq;
            },
            sent);
        if (r.responded()) return r;
    }
    return {};
}

ProbeReply LiveProber::echo(Ipv4 target) {
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
        std::uint16_t seq = next_tag_++;
        send_icmp(target, 255, build_echo_request(opts_.echo_ident, seq));
        auto sent = Clock::now();
        ProbeReply r = await(
            [&](const IcmpReply& m) {
                return m.kind() == ReplyKind::EchoReply && m.source == target && m.echo_ident == opts_.echo_ident &&
                       m.echo_seq == seq;
            },
            sent);
        if (r.responded()) return r;
    }
    return {};
}

ProbeReply LiveProber::udp(Ipv4 target) {
    const std::uint16_t sport = std::uint16_t(opts_.echo_ident | 0x8000);
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
        std::uint16_t tag = next_tag_++;
        send_raw(target, build_udp_probe(source_for(target), target, 255, sport, tag));
        auto sent = Clock::now();
        ProbeReply r = await(
            [&](const IcmpReply& m) {
                return m.kind() == ReplyKind::DestUnreachable && m.quoted_protocol == 17 && m.quoted_dst == target &&
                       m.quoted_sport == sport && m.quoted_ip_id == tag;
            },
            sent);
        if (r.responded()) return r;
    }
    return {};
}

}  // namespace tnt::live
