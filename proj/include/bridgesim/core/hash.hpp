#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>
#include <string_view>

#include "bridgesim/core/types.hpp"

namespace bridgesim {

/// Name of the digest recorded in trace headers so runs stay comparable.
inline constexpr std::string_view digest_algorithm = "sha256";

inline Digest sha256(std::span<const std::uint8_t> data)
{
    Digest out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != Digest::size) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

inline Digest sha256(std::string_view text)
{
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Deterministic address derived from a human label; used for fixtures.
inline Address address_from_label(std::string_view label)
{
    Digest d = sha256(label);
    Address a;
    std::copy_n(d.bytes.begin(), Address::size, a.bytes.begin());
    return a;
}

} // namespace bridgesim
