#pragma once

#include <string>
#include <vector>

#include "bridgesim/contracts/sc_a.hpp"
#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

// Native-gas side chains have no side-chain token supply of their own: bridged
// value lives in SC_Trading's ledger, which SC_Consensus credits and debits.

namespace detail {

inline void ledger_credit(ScTrading& t, const Address& to, TokenAmount v)
{
    t.balances[to] = add_or_throw(t.balance_of(to), v);
}

inline void ledger_debit(ScTrading& t, const Address& from, TokenAmount v)
{
    auto left = t.balance_of(from).checked_sub(v);
    if (!left) throw ContractError(Reason::InsufficientLedgerBalance, from.hex());
    if (left->is_zero()) t.balances.erase(from);
    else t.balances[from] = *left;
}

inline void consensus_item(ExecContext& ctx, const Address& self, ScConsensus& c, const TransferItem& item)
{
    auto& trading = ctx.contract<ScTrading>(c.sc_trading);
    switch (item.kind) {
    case ItemKind::RegistrationPayout:
        if (c.registration_paid) throw ContractError(Reason::AlreadyRegistered);
        ledger_credit(trading, item.to, item.value);
        c.registration_paid = true;
        return;
    case ItemKind::Inbound:
        ledger_credit(trading, item.to, item.value);
        c.total_inbound = add_or_throw(c.total_inbound, item.value);
        return;
    case ItemKind::WithdrawConfirm:
        ledger_debit(trading, item.from, item.value);
        c.total_outbound = add_or_throw(c.total_outbound, item.value);
        ctx.emit(self, AssetsLockedData{ChainId{}, item.request_id, item.from, item.to, item.value});
        return;
    case ItemKind::Outbound: break;
    }
    throw ContractError(Reason::MalformedPayload, "outbound items belong on the token chain");
}

} // namespace detail

/// Witness relay into SC_Consensus: registration payout, token-chain deposits
/// and confirmations of withdraw requests.
inline void sc_consensus_transferring(ExecContext& ctx, const Address& self, ScConsensus& c, const Address& witness,
                                      std::uint64_t round, const Transferring& t)
{
    check_transferring(self, t);
    if (!c.votes.cast_or_throw(witness, round, t.subject)) return;
    std::vector<std::string> results;
    for (const auto& item : t.items) {
        try {
            detail::consensus_item(ctx, self, c, item);
            results.emplace_back("ok");
        } catch (const ContractError& e) {
            results.emplace_back(to_string(e.reason()));
        }
    }
    c.votes.mark_executed(t.subject);
    ctx.emit(self, ConsensusResultData{t.subject, "executed", c.votes.round(), results});
}

/// A ledger holder asks to move value back to the token chain. Nothing is
/// debited yet; the witnesses confirm the request first.
inline void sc_consensus_withdraw_request(ExecContext& ctx, const Address& self, ScConsensus& c, const Address& from,
                                          const TradingAction& a)
{
    if (a.op != TradingAction::Op::Withdraw) throw ContractError(Reason::MalformedPayload);
    if (a.value.is_zero()) throw ContractError(Reason::MalformedPayload, "zero withdrawal");
    const auto& trading = ctx.contract<ScTrading>(c.sc_trading);
    if (trading.balance_of(from) < a.value) throw ContractError(Reason::InsufficientLedgerBalance);
    ArrivalData ev;
    ev.kind = ArrivalKind::WithdrawRequest;
    ev.request_id = c.next_request_id++;
    ev.from = from;
    ev.to = a.to;
    ev.value = a.value;
    ctx.emit(self, ev);
}

/// Ledger transfer between holders, initiated by the sender.
inline void sc_trading_transfer(ScTrading& t, const Address& from, const TradingAction& a)
{
    if (a.op != TradingAction::Op::Transfer) throw ContractError(Reason::MalformedPayload);
    if (t.balance_of(from) < a.value) throw ContractError(Reason::InsufficientLedgerBalance);
    if (a.value.is_zero() || from == a.to) return;
    detail::ledger_debit(t, from, a.value);
    detail::ledger_credit(t, a.to, a.value);
}

} // namespace bridgesim
