#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bridgesim/contracts/quorum.hpp"
#include "bridgesim/core/genesis.hpp"
#include "bridgesim/core/transaction.hpp"

namespace bridgesim {

enum class ChainKind { TokenChain, GaslessSideChain, NativeGasSideChain };

inline std::string_view to_string(ChainKind k)
{
    switch (k) {
    case ChainKind::TokenChain: return "token";
    case ChainKind::GaslessSideChain: return "gasless_side";
    case ChainKind::NativeGasSideChain: return "native_gas_side";
    }
    return "?";
}

/// Inbound safety check applied by SC_Inter before SC_Bank releases tokens.
///  - Conservation: the side chain's post-transfer circulating supply may not
///    exceed the SC_A.locked value reported with the originating deposit.
///  - Strict: bank-after + entrance fee + requested == total supply, exactly
///    as the literal rule reads (holds only while no net disbursement exists).
enum class GateMode { Conservation, Strict };

inline std::string_view to_string(GateMode m) { return m == GateMode::Conservation ? "conservation" : "strict"; }

struct PendingRegistration {
    std::uint64_t request_id = 0;
    Digest subject;
    ChainId chain_id;
    Address creator;
    Address creator_side;
    TokenAmount attached;
    TokenAmount amount; // attached - compensation fee; this is what gets locked
    TokenAmount fee;
    Digest genesis_hash;
    std::uint64_t deadline = 0;
    std::set<Address> dissent; // witnesses that voted false
};

/// SC_A: token-chain bridge head dedicated to one side chain.
struct ScA {
    ChainId chain_id;
    SideVariant variant = SideVariant::Gasless;
    Address sc_id;
    VoteBook votes;
    TokenAmount locked;
    bool registered = false;
    TokenAmount compensation_fee;
    TokenAmount entrance_fee_minimum;
    std::uint64_t timeout = 50;
    std::optional<PendingRegistration> pending;
    Address creator;
    Address creator_side;
    TokenAmount registration_amount;
    std::uint64_t next_request_id = 1;

    // peg bookkeeping for subsequent transfers
    TokenAmount total_deposited;
    TokenAmount total_unlocked;
    std::uint64_t reverted_registrations = 0;
};

struct RegistryState {
    std::vector<ChainId> chain_ids;

    bool contains(const ChainId& id) const
    {
        return std::find(chain_ids.begin(), chain_ids.end(), id) != chain_ids.end();
    }
};

/// SC_ID: the token chain's registry of side-chain ids.
struct ScId {
    RegistryState registry;
    Multisig multisig;
};

/// SC_Register: one-shot registration payout contract on a gasless side chain.
struct ScRegister {
    VoteBook votes;
    Multisig owners;
    bool paid_out = false;
    bool suicided = false;
};

/// SC_Inter: relay for subsequent transfers in both directions.
struct ScInter {
    VoteBook votes;
    Address sc_bank;
    Address sc_register;
    TokenAmount total_supply;
    TokenAmount entrance_fee; // Bal_Resv
    GateMode mode = GateMode::Conservation;
    bool per_transfer_approval = false;
    std::map<Digest, std::vector<TransferItem>> awaiting_approval;
    std::uint64_t next_request_id = 1;

    TokenAmount total_inbound;
    TokenAmount total_outbound;
};

/// SC_Bank: holds the reserved side-chain supply; only SC_Inter may move it.
struct ScBank {
    std::optional<Address> authorized_inter;
    Multisig owners;
    std::uint64_t releases = 0;
    std::uint64_t locks = 0;
};

/// SC_Consensus: merged registration + relay contract of a native-gas chain.
struct ScConsensus {
    VoteBook votes;
    Address sc_trading;
    Multisig owners;
    bool registration_paid = false;
    std::uint64_t next_request_id = 1;

    TokenAmount total_inbound;
    TokenAmount total_outbound;
};

/// SC_Trading: ledger of bridged token value on a native-gas chain.
struct ScTrading {
    Address sc_consensus;
    Multisig owners;
    std::map<Address, TokenAmount> balances;

    TokenAmount sum() const
    {
        TokenAmount s;
        for (const auto& [_, v] : balances) s = add_or_throw(s, v);
        return s;
    }

    TokenAmount balance_of(const Address& a) const
    {
        auto it = balances.find(a);
        return it == balances.end() ? TokenAmount{} : it->second;
    }
};

using Contract = std::variant<ScA, ScId, ScRegister, ScInter, ScBank, ScConsensus, ScTrading>;

/// Full state of one chain: token balances (accounts and contracts alike) and
/// contract storage.
struct ChainState {
    std::map<Address, TokenAmount> accounts;
    std::map<Address, Contract> contracts;

    TokenAmount balance(const Address& a) const
    {
        auto it = accounts.find(a);
        return it == accounts.end() ? TokenAmount{} : it->second;
    }

    TokenAmount total_balance() const
    {
        TokenAmount s;
        for (const auto& [_, v] : accounts) s = add_or_throw(s, v);
        return s;
    }

    template <class T>
    const T* find(const Address& a) const
    {
        auto it = contracts.find(a);
        return it == contracts.end() ? nullptr : std::get_if<T>(&it->second);
    }

    template <class T>
    T* find(const Address& a)
    {
        auto it = contracts.find(a);
        return it == contracts.end() ? nullptr : std::get_if<T>(&it->second);
    }

    /// First contract of type T, for chains that host exactly one.
    template <class T>
    std::pair<Address, const T*> first() const
    {
        for (const auto& [addr, c] : contracts) {
            if (auto p = std::get_if<T>(&c)) return {addr, p};
        }
        return {Address{}, nullptr};
    }
};

/// Execution environment of one transaction (or the end-of-block step).
class ExecContext {
public:
    ExecContext(ChainState& state, ChainKind kind, Origin origin, std::uint64_t timestamp, std::vector<Event>& events)
        : state_(state), kind_(kind), origin_(origin), timestamp_(timestamp), events_(events)
    {
    }

    ChainState& state() { return state_; }
    ChainKind kind() const { return kind_; }
    std::uint64_t timestamp() const { return timestamp_; }
    const Origin& origin() const { return origin_; }

    void emit(const Address& contract, EventData data) { events_.push_back(Event{contract, std::move(data), origin_}); }

    TokenAmount balance(const Address& a) const { return state_.balance(a); }

    void transfer(const Address& from, const Address& to, TokenAmount value)
    {
        if (value.is_zero() || from == to) return;
        auto remaining = state_.balance(from).checked_sub(value);
        if (!remaining) throw ContractError(Reason::InsufficientBalance, from.hex());
        auto credited = add_or_throw(state_.balance(to), value);
        state_.accounts[from] = *remaining;
        state_.accounts[to] = credited;
    }

    template <class T>
    T& contract(const Address& a)
    {
        T* p = state_.find<T>(a);
        if (!p) throw std::logic_error("no contract of the expected type at " + a.hex());
        return *p;
    }

private:
    ChainState& state_;
    ChainKind kind_;
    Origin origin_;
    std::uint64_t timestamp_;
    std::vector<Event>& events_;
};

} // namespace bridgesim
