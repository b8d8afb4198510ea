#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tnt {

struct Ipv4 {
    std::uint32_t value = 0;

    constexpr Ipv4() = default;
    constexpr explicit Ipv4(std::uint32_t v) : value(v) {}
    constexpr Ipv4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
        : value((std::uint32_t(a) << 24) | (std::uint32_t(b) << 16) | (std::uint32_t(c) << 8) | d) {}

    static std::optional<Ipv4> parse(std::string_view text);
    std::string str() const;

    friend constexpr bool operator==(Ipv4, Ipv4) = default;
    friend constexpr auto operator<=>(Ipv4, Ipv4) = default;
};

struct Prefix {
    Ipv4 network;
    int length = 32;

    static std::optional<Prefix> parse(std::string_view text);
    static Prefix of(Ipv4 addr, int length);
    bool contains(Ipv4 addr) const;
    std::string str() const;

    friend bool operator==(const Prefix&, const Prefix&) = default;
    friend auto operator<=>(const Prefix&, const Prefix&) = default;
};

std::uint32_t prefix_mask(int length);

}  // namespace tnt
