#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bridgesim {

/// Raised when textual input (hex, JSON fields) cannot be decoded.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1; // canonical hex is lowercase
}

inline std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(2 + bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> from_hex(std::string_view text, std::string_view what)
{
    if (text.size() != 2 + 2 * N || text[0] != '0' || text[1] != 'x') {
        throw ParseError(std::string(what) + ": expected 0x followed by " + std::to_string(2 * N) +
                         " hex digits, got '" + std::string(text) + "'");
    }
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        int hi = hex_value(text[2 + 2 * i]);
        int lo = hex_value(text[3 + 2 * i]);
        if (hi < 0 || lo < 0) {
            throw ParseError(std::string(what) + ": invalid hex digit (lowercase required) in '" + std::string(text) + "'");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

} // namespace detail

/// 20-byte account or contract identifier (16^40 possible values).
struct Address {
    static constexpr std::size_t size = 20;
    std::array<std::uint8_t, size> bytes{};

    static Address from_hex(std::string_view text) { return Address{detail::from_hex<size>(text, "address")}; }
    std::string hex() const { return detail::to_hex(bytes); }
    bool is_zero() const { return *this == Address{}; }

    auto operator<=>(const Address&) const = default;
};

/// 32-byte content digest.
struct Digest {
    static constexpr std::size_t size = 32;
    std::array<std::uint8_t, size> bytes{};

    static Digest from_hex(std::string_view text) { return Digest{detail::from_hex<size>(text, "digest")}; }
    std::string hex() const { return detail::to_hex(bytes); }

    auto operator<=>(const Digest&) const = default;
};

/// Chain identifiers share the address format.
using ChainId = Address;

/// Count of the smallest indivisible token unit. Arithmetic is checked: an
/// operation that would overflow or go negative yields nullopt.
class TokenAmount {
public:
    constexpr TokenAmount() = default;
    constexpr explicit TokenAmount(std::uint64_t units) : units_(units) {}

    constexpr std::uint64_t units() const { return units_; }
    constexpr bool is_zero() const { return units_ == 0; }

    constexpr std::optional<TokenAmount> checked_add(TokenAmount other) const
    {
        if (units_ > std::numeric_limits<std::uint64_t>::max() - other.units_) return std::nullopt;
        return TokenAmount{units_ + other.units_};
    }

    constexpr std::optional<TokenAmount> checked_sub(TokenAmount other) const
    {
        if (other.units_ > units_) return std::nullopt;
        return TokenAmount{units_ - other.units_};
    }

    constexpr auto operator<=>(const TokenAmount&) const = default;

private:
    std::uint64_t units_ = 0;
};

/// Checked arithmetic that treats overflow/underflow as a programming error.
/// Contract code checks preconditions first and then uses these.
inline TokenAmount add_or_throw(TokenAmount a, TokenAmount b)
{
    auto r = a.checked_add(b);
    if (!r) throw std::overflow_error("token amount overflow");
    return *r;
}

inline TokenAmount sub_or_throw(TokenAmount a, TokenAmount b)
{
    auto r = a.checked_sub(b);
    if (!r) throw std::underflow_error("token amount underflow");
    return *r;
}

} // namespace bridgesim
