#pragma once

#include <json.hpp>

#include <string>

#include "bridgesim/core/hash.hpp"
#include "bridgesim/core/types.hpp"

namespace bridgesim {

using json = nlohmann::json;

class SerializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// nlohmann::json stores objects in a std::map, so dump() already emits keys in
// lexicographic order with no insignificant whitespace.
inline std::string canonical_dump(const json& value) { return value.dump(); }

inline Digest canonical_digest(const json& value) { return sha256(canonical_dump(value)); }

/// Parses `text` and requires it to already be in canonical form.
inline json parse_canonical(std::string_view text)
{
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SerializationError(std::string("malformed JSON: ") + e.what());
    }
    if (canonical_dump(value) != text) {
        throw SerializationError("input is not in canonical form (sorted keys, no whitespace, lowercase hex)");
    }
    return value;
}

inline void to_json(json& j, const Address& a) { j = a.hex(); }
inline void from_json(const json& j, Address& a)
{
    if (!j.is_string()) throw ParseError("address: expected a string");
    a = Address::from_hex(j.get<std::string>());
}

inline void to_json(json& j, const Digest& d) { j = d.hex(); }
inline void from_json(const json& j, Digest& d)
{
    if (!j.is_string()) throw ParseError("digest: expected a string");
    d = Digest::from_hex(j.get<std::string>());
}

inline void to_json(json& j, const TokenAmount& t) { j = t.units(); }
inline void from_json(const json& j, TokenAmount& t)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ParseError("token amount: expected a non-negative integer");
    }
    t = TokenAmount{j.get<std::uint64_t>()};
}

} // namespace bridgesim
