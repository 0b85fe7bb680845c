#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bridgesim/contracts/state.hpp"
#include "bridgesim/core/genesis.hpp"

namespace bridgesim {

/// The witness could not obtain the side chain's genesis file. Not a verdict:
/// the witness abstains.
class FetchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What a registration request claims, as seen in the CrossChainArrived event.
struct RegistrationClaim {
    ChainId chain_id;
    TokenAmount amount;
    Digest genesis_hash;
};

/// The six registration conditions, evaluated individually so callers can
/// report which one failed.
struct RegistrationCheck {
    bool hash_matches = false;      // hash of the fetched genesis == requested hash
    bool height_zero = false;       // side chain holds only its genesis block
    bool balance_matches = false;   // requested amount == Bal_Resv
    bool chain_id_matches = false;  // requested id == Chain_ID in the file
    bool not_token_chain = false;   // requested id != token chain id
    bool not_registered = false;    // requested id not yet in SC_ID

    std::array<bool, 6> flags() const
    {
        return {hash_matches, height_zero, balance_matches, chain_id_matches, not_token_chain, not_registered};
    }

    bool all() const
    {
        for (bool f : flags()) {
            if (!f) return false;
        }
        return true;
    }
};

inline RegistrationCheck evaluate_registration(std::string_view genesis_file, std::uint64_t side_height,
                                               const RegistrationClaim& claim, const RegistryState& registry,
                                               const ChainId& token_chain_id)
{
    RegistrationCheck c;
    c.hash_matches = sha256(genesis_file) == claim.genesis_hash;
    c.height_zero = side_height == 0;
    c.not_token_chain = claim.chain_id != token_chain_id;
    c.not_registered = !registry.contains(claim.chain_id);

    json j = json::parse(genesis_file, nullptr, false);
    if (j.is_discarded()) return c;
    Diagnostics diags;
    GenesisSpec g = parse_genesis(j, SideVariant::Gasless, "genesis", diags);
    if (!diags.empty()) return c;
    c.balance_matches = claim.amount == g.bal_resv;
    c.chain_id_matches = claim.chain_id == g.chain_id;
    return c;
}

inline bool validate_registration(std::string_view genesis_file, std::uint64_t side_height,
                                  const RegistrationClaim& claim, const RegistryState& registry,
                                  const ChainId& token_chain_id)
{
    return evaluate_registration(genesis_file, side_height, claim, registry, token_chain_id).all();
}

/// Native-gas chains may already be running and need no entrance fee, so only
/// the chain-id conditions apply.
inline bool validate_registration_nativegas(const RegistrationClaim& claim, const ChainId& genesis_chain_id,
                                            const RegistryState& registry, const ChainId& token_chain_id)
{
    return claim.chain_id == genesis_chain_id && claim.chain_id != token_chain_id && !registry.contains(claim.chain_id);
}

} // namespace bridgesim
