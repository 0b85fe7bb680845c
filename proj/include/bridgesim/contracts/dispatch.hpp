#pragma once

#include <variant>
#include <vector>

#include "bridgesim/contracts/native.hpp"
#include "bridgesim/contracts/sc_a.hpp"
#include "bridgesim/contracts/sc_id.hpp"
#include "bridgesim/contracts/side_bank.hpp"
#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

namespace detail {

inline const VoteBook* votes_of(const Contract& c)
{
    if (auto p = std::get_if<ScRegister>(&c)) return &p->votes;
    if (auto p = std::get_if<ScInter>(&c)) return &p->votes;
    return nullptr;
}

inline bool owns(const ChainState& s, const Contract& c, const Address& who)
{
    if (auto p = std::get_if<ScRegister>(&c)) return p->owners.is_owner(who);
    if (auto p = std::get_if<ScBank>(&c)) return p->owners.is_owner(who);
    if (auto p = std::get_if<ScInter>(&c)) {
        // release approvals come from SC_Bank's owners
        auto bank = s.find<ScBank>(p->sc_bank);
        return bank && bank->owners.is_owner(who);
    }
    return false;
}

/// Gasless side chains: a zero gasprice is accepted only for witness traffic
/// to SC_Register/SC_Inter, for contract senders, and for owners' multisig
/// actions on their contract. Everyone else must bid a gasprice and be able to
/// cover it. Gas is checked but not charged.
inline void check_gas(const ChainState& s, const Transaction& tx)
{
    if (s.contracts.contains(tx.from)) return;
    auto target = s.contracts.find(tx.to);
    if (tx.gasprice == 0 && target != s.contracts.end()) {
        if (auto vb = votes_of(target->second); vb && vb->is_voter(tx.from)) return;
        if (std::holds_alternative<MultisigAction>(tx.payload) && owns(s, target->second, tx.from)) return;
    }
    if (tx.gasprice == 0) throw ContractError(Reason::ZeroGaspriceNotExempt);
    auto needed = tx.value.checked_add(TokenAmount{tx.gasprice});
    if (!needed || s.balance(tx.from) < *needed) {
        throw ContractError(Reason::InsufficientBalance, "value + gasprice not covered");
    }
}

inline bool carries_value(const Payload& p)
{
    return std::holds_alternative<RegistrationRequest>(p) || std::holds_alternative<UserTransfer>(p);
}

[[noreturn]] inline void unsupported(const Transaction& tx)
{
    throw ContractError(Reason::MalformedPayload,
                        std::string(to_string(payload_kind(tx.payload))) + " not accepted by " + tx.to.hex());
}

inline std::uint64_t round_of(const Transaction& tx)
{
    if (!tx.round) throw ContractError(Reason::MalformedPayload, "vote without a round");
    return *tx.round;
}

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline void route(ExecContext& ctx, Contract& c, const Transaction& tx)
{
    const Address& self = tx.to;
    const Payload& p = tx.payload;
    std::visit(
        overloaded{
            [&](ScA& a) {
                if (auto r = std::get_if<RegistrationRequest>(&p)) return sc_a_request_registration(ctx, self, a, tx, *r);
                if (auto v = std::get_if<Confirm>(&p)) return sc_a_confirm(ctx, self, a, tx.from, round_of(tx), *v);
                if (auto t = std::get_if<Transferring>(&p))
                    return sc_a_transferring(ctx, self, a, tx.from, round_of(tx), *t);
                if (auto u = std::get_if<UserTransfer>(&p); u && u->destination)
                    return sc_a_deposit(ctx, self, a, tx, *u->destination);
                unsupported(tx);
            },
            [&](ScId& id) {
                if (auto m = std::get_if<MultisigAction>(&p)) return sc_id_approve(id, tx.from, *m);
                unsupported(tx);
            },
            [&](ScRegister& r) {
                if (auto t = std::get_if<Transferring>(&p))
                    return sc_register_transferring(ctx, self, r, tx.from, round_of(tx), *t);
                if (auto m = std::get_if<MultisigAction>(&p)) return sc_register_approve(ctx, self, r, tx.from, *m);
                unsupported(tx);
            },
            [&](ScInter& in) {
                if (auto t = std::get_if<Transferring>(&p))
                    return sc_inter_transferring(ctx, self, in, tx.from, round_of(tx), *t);
                if (auto m = std::get_if<MultisigAction>(&p)) return sc_inter_approve(ctx, self, in, tx.from, *m);
                if (auto u = std::get_if<UserTransfer>(&p); u && u->destination)
                    return sc_inter_outbound(ctx, self, in, tx, *u->destination);
                unsupported(tx);
            },
            [&](ScBank& b) {
                if (auto m = std::get_if<MultisigAction>(&p)) return sc_bank_approve(b, tx.from, *m);
                throw ContractError(Reason::AccessDenied, "SC_Bank accepts only owner actions");
            },
            [&](ScConsensus& cs) {
                if (auto t = std::get_if<Transferring>(&p))
                    return sc_consensus_transferring(ctx, self, cs, tx.from, round_of(tx), *t);
                if (auto a = std::get_if<TradingAction>(&p))
                    return sc_consensus_withdraw_request(ctx, self, cs, tx.from, *a);
                unsupported(tx);
            },
            [&](ScTrading& tr) {
                if (auto a = std::get_if<TradingAction>(&p)) return sc_trading_transfer(tr, tx.from, *a);
                unsupported(tx);
            },
        },
        c);
}

} // namespace detail

/// Applies one transaction to `ctx.state()`. Throws ContractError on
/// rejection; the caller is responsible for discarding partial effects.
inline void apply_transaction(ExecContext& ctx, const Transaction& tx)
{
    ChainState& s = ctx.state();
    if (payload_requires_round(tx.payload) && !tx.round) {
        throw ContractError(Reason::MalformedPayload, "vote without a round");
    }
    if (!detail::carries_value(tx.payload) && !tx.value.is_zero()) {
        throw ContractError(Reason::MalformedPayload, "payload does not carry value");
    }
    if (ctx.kind() == ChainKind::GaslessSideChain) detail::check_gas(s, tx);

    auto it = s.contracts.find(tx.to);
    if (it == s.contracts.end()) {
        if (std::holds_alternative<IoTRecord>(tx.payload)) return;
        auto u = std::get_if<UserTransfer>(&tx.payload);
        if (!u || u->destination) throw ContractError(Reason::MalformedPayload, "no contract at " + tx.to.hex());
        if (s.balance(tx.from) < tx.value) throw ContractError(Reason::InsufficientBalance, tx.from.hex());
        ctx.transfer(tx.from, tx.to, tx.value);
        return;
    }
    detail::route(ctx, it->second, tx);
}

/// Time-driven contract work run after the last transaction of each block.
inline void apply_block_end(ExecContext& ctx)
{
    for (auto& [addr, c] : ctx.state().contracts) {
        if (auto a = std::get_if<ScA>(&c)) sc_a_on_block_end(ctx, addr, *a);
    }
}

} // namespace bridgesim
