#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "bridgesim/core/canonical.hpp"
#include "bridgesim/core/diagnostic.hpp"
#include "bridgesim/core/types.hpp"

namespace bridgesim {

enum class SideVariant { Gasless, NativeGas };

inline std::string_view to_string(SideVariant v) { return v == SideVariant::Gasless ? "gasless" : "native_gas"; }

/// Pre-defined genesis of a side chain. Gasless chains carry the seven
/// SC_Register/SC_Inter/SC_Bank fields; native-gas chains carry Chain_ID,
/// SC_Register (the merged consensus contract), SC_Trading and Wit_Addr_List.
struct GenesisSpec {
    SideVariant variant = SideVariant::Gasless;
    ChainId chain_id;
    Address sc_register;
    std::vector<Address> witnesses;

    // gasless only
    TokenAmount bal_resv;
    Address sc_inter;
    Address sc_bank;
    TokenAmount bal_bank;

    // native gas only
    Address sc_trading;

    bool operator==(const GenesisSpec&) const = default;
};

inline const std::vector<std::string>& genesis_fields(SideVariant v)
{
    static const std::vector<std::string> gasless{"Chain_ID", "SC_Register", "Bal_Resv", "SC_Inter",
                                                  "SC_Bank",  "Bal_Bank",    "Wit_Addr_List"};
    static const std::vector<std::string> native{"Chain_ID", "SC_Register", "SC_Trading", "Wit_Addr_List"};
    return v == SideVariant::Gasless ? gasless : native;
}

inline json to_json_value(const GenesisSpec& g)
{
    json j{{"Chain_ID", g.chain_id}, {"SC_Register", g.sc_register}, {"Wit_Addr_List", g.witnesses}};
    if (g.variant == SideVariant::Gasless) {
        j["Bal_Resv"] = g.bal_resv;
        j["SC_Inter"] = g.sc_inter;
        j["SC_Bank"] = g.sc_bank;
        j["Bal_Bank"] = g.bal_bank;
    } else {
        j["SC_Trading"] = g.sc_trading;
    }
    return j;
}

inline std::string canonical_text(const GenesisSpec& g) { return canonical_dump(to_json_value(g)); }

/// Digest of the canonical serialization; identifies the genesis block.
inline Digest genesis_hash(const GenesisSpec& g) { return sha256(canonical_text(g)); }

/// Hash of a genesis file's bytes; rejects text that is not canonical.
inline Digest genesis_hash_from_text(std::string_view text)
{
    parse_canonical(text);
    return sha256(text);
}

/// Field-by-field decoding that reports every problem rather than the first.
/// The variant decides the required field set; unknown fields are rejected.
inline GenesisSpec parse_genesis(const json& j, SideVariant variant, const std::string& path, Diagnostics& diags)
{
    GenesisSpec g;
    g.variant = variant;
    if (!j.is_object()) {
        diags.push_back({path, "type", "genesis must be a JSON object"});
        return g;
    }
    const auto& fields = genesis_fields(variant);
    for (const auto& f : fields) {
        if (!j.contains(f)) diags.push_back({path + "." + f, "required-field", "missing required genesis field"});
    }
    for (const auto& [key, _] : j.items()) {
        if (std::find(fields.begin(), fields.end(), key) == fields.end()) {
            diags.push_back({path + "." + key, "unknown-field",
                             "field is not part of the " + std::string(to_string(variant)) + " genesis format"});
        }
    }
    auto read_address = [&](const char* key, Address& out) {
        if (!j.contains(key)) return;
        try {
            out = j.at(key).get<Address>();
        } catch (const std::exception& e) {
            diags.push_back({path + "." + key, "address", e.what()});
        }
    };
    auto read_amount = [&](const char* key, TokenAmount& out) {
        if (!j.contains(key)) return;
        try {
            out = j.at(key).get<TokenAmount>();
        } catch (const std::exception& e) {
            diags.push_back({path + "." + key, "amount", e.what()});
        }
    };
    read_address("Chain_ID", g.chain_id);
    read_address("SC_Register", g.sc_register);
    if (j.contains("Wit_Addr_List")) {
        const auto& list = j.at("Wit_Addr_List");
        if (!list.is_array()) {
            diags.push_back({path + ".Wit_Addr_List", "type", "expected an array of addresses"});
        } else {
            std::set<Address> seen;
            for (std::size_t i = 0; i < list.size(); ++i) {
                std::string field = path + ".Wit_Addr_List[" + std::to_string(i) + "]";
                try {
                    auto a = list[i].get<Address>();
                    if (!seen.insert(a).second) diags.push_back({field, "unique", "duplicate witness address"});
                    g.witnesses.push_back(a);
                } catch (const std::exception& e) {
                    diags.push_back({field, "address", e.what()});
                }
            }
            if (list.empty()) diags.push_back({path + ".Wit_Addr_List", "non-empty", "at least one witness required"});
        }
    }
    if (variant == SideVariant::Gasless) {
        read_amount("Bal_Resv", g.bal_resv);
        read_address("SC_Inter", g.sc_inter);
        read_address("SC_Bank", g.sc_bank);
        read_amount("Bal_Bank", g.bal_bank);
        std::set<Address> contracts{g.sc_register, g.sc_inter, g.sc_bank};
        if (j.contains("SC_Register") && j.contains("SC_Inter") && j.contains("SC_Bank") && contracts.size() != 3) {
            diags.push_back({path, "distinct-contracts", "SC_Register, SC_Inter and SC_Bank must be distinct"});
        }
    } else {
        read_address("SC_Trading", g.sc_trading);
        if (j.contains("SC_Register") && j.contains("SC_Trading") && g.sc_register == g.sc_trading) {
            diags.push_back({path, "distinct-contracts", "SC_Register and SC_Trading must be distinct"});
        }
    }
    return g;
}

/// Variant inferred from the field set of a standalone genesis file.
inline SideVariant infer_variant(const json& j)
{
    return j.is_object() && j.contains("SC_Trading") ? SideVariant::NativeGas : SideVariant::Gasless;
}

/// Rules that need the token chain's total supply: Bal_Resv + Bal_Bank must
/// account for every token, and the entrance fee must meet its lower bound.
inline void check_genesis_supply(const GenesisSpec& g, TokenAmount total_supply, TokenAmount entrance_fee_minimum,
                                 const std::string& path, Diagnostics& diags)
{
    if (g.variant != SideVariant::Gasless) return;
    auto sum = g.bal_resv.checked_add(g.bal_bank);
    if (!sum || *sum != total_supply) {
        diags.push_back({path, "supply-identity",
                         "Bal_Resv + Bal_Bank (" +
                             (sum ? std::to_string(sum->units()) : std::string("overflow")) +
                             ") must equal the token chain total supply (" + std::to_string(total_supply.units()) +
                             ")"});
    }
    if (g.bal_resv < entrance_fee_minimum) {
        diags.push_back({path + ".Bal_Resv", "entrance-fee-minimum",
                         "entrance fee " + std::to_string(g.bal_resv.units()) + " is below the minimum bound " +
                             std::to_string(entrance_fee_minimum.units())});
    }
}

} // namespace bridgesim
