#include "tnt/ipv4.hpp"

#include <charconv>

namespace tnt {

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    std::uint32_t v = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    for (int i = 0; i < 4; ++i) {
        unsigned octet = 0;
        auto [next, ec] = std::from_chars(p, end, octet);
        if (ec != std::errc{} || next == p || octet > 255 || next - p > 3) return std::nullopt;
        v = (v << 8) | octet;
        p = next;
        if (i < 3) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
    }
    if (p != end) return std::nullopt;
    return Ipv4(v);
}

std::string Ipv4::str() const {
    return std::to_string(value >> 24) + "." + std::to_string((value >> 16) & 0xff) + "." +
           std::to_string((value >> 8) & 0xff) + "." + std::to_string(value & 0xff);
}

std::uint32_t prefix_mask(int length) {
    if (length <= 0) return 0;
    if (length >= 32) return 0xffffffffu;
    return ~((1u << (32 - length)) - 1);
}

std::optional<Prefix> Prefix::parse(std::string_view text) {
    auto slash = text.find('/');
    int len = 32;
    if (slash != std::string_view::npos) {
        auto tail = text.substr(slash + 1);
        auto [next, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), len);
        if (ec != std::errc{} || next != tail.data() + tail.size() || len < 0 || len > 32) return std::nullopt;
        text = text.substr(0, slash);
    }
    auto addr = Ipv4::parse(text);
    if (!addr) return std::nullopt;
    return Prefix::of(*addr, len);
}

Prefix Prefix::of(Ipv4 addr, int length) { return Prefix{Ipv4(addr.value & prefix_mask(length)), length}; }

bool Prefix::contains(Ipv4 addr) const { return (addr.value & prefix_mask(length)) == network.value; }

std::string Prefix::str() const { return network.str() + "/" + std::to_string(length); }

}  // namespace tnt
