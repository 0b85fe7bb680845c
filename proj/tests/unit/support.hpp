#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bridgesim/core/chain.hpp"

namespace bridgesim::test {

inline Address addr(std::string_view label) { return address_from_label(label); }
inline TokenAmount tok(std::uint64_t n) { return TokenAmount{n}; }

/// Single-transaction sandbox: direct contract calls against a state.
struct Sandbox {
    ChainState state;
    std::vector<Event> events;
    ChainKind kind = ChainKind::TokenChain;
    std::uint64_t now = 0;

    ExecContext ctx() { return ExecContext(state, kind, Origin{1, 0}, now, events); }

    template <class T>
    T& get(const Address& a)
    {
        return std::get<T>(state.contracts.at(a));
    }

    /// Full dispatch on a copy, committed only on success (as a block would).
    void apply(const Transaction& tx)
    {
        ChainState attempt = state;
        std::vector<Event> ev;
        ExecContext c(attempt, kind, Origin{1, 0}, now, ev);
        apply_transaction(c, tx);
        state = std::move(attempt);
        events.insert(events.end(), ev.begin(), ev.end());
    }
};

inline Transaction make_tx(const Address& from, const Address& to, Payload p, std::uint64_t value = 0,
                           std::optional<std::uint64_t> round = std::nullopt, std::uint64_t gasprice = 0)
{
    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.value = TokenAmount{value};
    tx.round = round;
    tx.gasprice = gasprice;
    tx.payload = std::move(p);
    return tx;
}

inline Transferring batch(const Address& target, std::vector<TransferItem> items, std::uint64_t first = 0)
{
    Transferring t{addr("source"), first, first, target, std::move(items), {}};
    t.subject = transferring_subject(t);
    return t;
}

/// Reason the call was rejected with, or nullopt if it went through.
inline std::optional<Reason> reason_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ContractError& e) {
        return e.reason();
    }
    return std::nullopt;
}

} // namespace bridgesim::test
