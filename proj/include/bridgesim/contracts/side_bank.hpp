#pragma once

#include <set>
#include <string>
#include <vector>

#include "bridgesim/contracts/sc_a.hpp"
#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

inline const std::string suicide_action = "suicide";
inline std::string authorize_inter_action(const Address& sc_inter) { return "authorize_inter:" + sc_inter.hex(); }
inline std::string release_action(const Digest& subject) { return "release:" + subject.hex(); }

// ---------------------------------------------------------------------------
// SC_Bank
// ---------------------------------------------------------------------------

inline void sc_bank_approve(ScBank& bank, const Address& owner, const MultisigAction& action)
{
    const std::string prefix = "authorize_inter:";
    if (action.action.rfind(prefix, 0) != 0) throw ContractError(Reason::MalformedPayload, action.action);
    Address inter = Address::from_hex(action.action.substr(prefix.size()));
    if (bank.owners.approve(owner, action.action)) bank.authorized_inter = inter;
}

/// Unlocks `value` from the bank to `to`. Only the authorized SC_Inter may call.
inline void sc_bank_release(ExecContext& ctx, const Address& self, ScBank& bank, const Address& caller,
                            const Address& to, TokenAmount value)
{
    if (!bank.authorized_inter || *bank.authorized_inter != caller) throw ContractError(Reason::NotAuthorized);
    ctx.transfer(self, to, value);
    ++bank.releases;
}

/// Locks `value` already held by SC_Inter into the bank and announces it.
inline void sc_bank_lock(ExecContext& ctx, const Address& self, ScBank& bank, const Address& caller,
                         const AssetsLockedData& lock)
{
    if (!bank.authorized_inter || *bank.authorized_inter != caller) throw ContractError(Reason::NotAuthorized);
    ctx.transfer(caller, self, lock.value);
    ++bank.locks;
    ctx.emit(self, lock);
}

// ---------------------------------------------------------------------------
// SC_Register
// ---------------------------------------------------------------------------

/// Witness relay of the registration success. At quorum the full register
/// balance goes to the creator's side-chain address.
inline void sc_register_transferring(ExecContext& ctx, const Address& self, ScRegister& reg, const Address& witness,
                                     std::uint64_t round, const Transferring& t)
{
    if (reg.suicided) throw ContractError(Reason::AlreadySuicided);
    check_transferring(self, t);
    if (!reg.votes.cast_or_throw(witness, round, t.subject)) return;
    std::vector<std::string> results;
    for (const auto& item : t.items) {
        TokenAmount balance = ctx.balance(self);
        if (item.kind != ItemKind::RegistrationPayout) {
            results.emplace_back(to_string(Reason::MalformedPayload));
        } else if (reg.paid_out || item.value != balance) {
            results.emplace_back(to_string(Reason::AmountMismatch));
        } else {
            ctx.transfer(self, item.to, balance);
            reg.paid_out = true;
            results.emplace_back("ok");
        }
    }
    reg.votes.mark_executed(t.subject);
    ctx.emit(self, ConsensusResultData{t.subject, "executed", reg.votes.round(), results});
}

/// Deactivates SC_Register given the owners' approvals. The balance must
/// already have been paid out.
inline void sc_register_suicide(ScRegister& reg, TokenAmount balance, const std::set<Address>& approvals)
{
    if (reg.suicided) throw ContractError(Reason::AlreadySuicided);
    std::size_t valid = 0;
    for (const auto& a : approvals) valid += reg.owners.is_owner(a) ? 1 : 0;
    if (valid < reg.owners.required()) {
        throw ContractError(Reason::MultisigIncomplete,
                            std::to_string(valid) + " of " + std::to_string(reg.owners.required()) + " approvals");
    }
    if (!balance.is_zero()) throw ContractError(Reason::NonzeroBalance, std::to_string(balance.units()));
    reg.suicided = true;
}

/// One owner's suicide approval delivered as a transaction.
inline void sc_register_approve(ExecContext& ctx, const Address& self, ScRegister& reg, const Address& owner,
                                const MultisigAction& action)
{
    if (reg.suicided) throw ContractError(Reason::AlreadySuicided);
    if (action.action != suicide_action) throw ContractError(Reason::MalformedPayload, action.action);
    if (!reg.owners.approve(owner, action.action)) return;
    sc_register_suicide(reg, ctx.balance(self), reg.owners.approvers(action.action));
}

// ---------------------------------------------------------------------------
// SC_Inter
// ---------------------------------------------------------------------------

/// Circulating side-chain supply: everything outside SC_Bank and SC_Register.
inline TokenAmount circulating_supply(const ChainState& s, const ScInter& inter)
{
    return sub_or_throw(sub_or_throw(inter.total_supply, s.balance(inter.sc_bank)), s.balance(inter.sc_register));
}

/// Safety gate evaluated before each inbound release.
inline void sc_inter_check_gate(const ChainState& s, const ScInter& inter, const TransferItem& item)
{
    TokenAmount bank = s.balance(inter.sc_bank);
    if (item.value > bank) {
        throw ContractError(Reason::SafetyGateViolation,
                            "value " + std::to_string(item.value.units()) + " exceeds bank " +
                                std::to_string(bank.units()));
    }
    TokenAmount bank_after = sub_or_throw(bank, item.value);
    if (inter.mode == GateMode::Strict) {
        auto lhs = add_or_throw(add_or_throw(bank_after, inter.entrance_fee), item.value);
        if (lhs != inter.total_supply) {
            throw ContractError(Reason::SafetyGateViolation,
                                "bank + entrance fee + requested = " + std::to_string(lhs.units()) +
                                    " != total " + std::to_string(inter.total_supply.units()));
        }
        return;
    }
    TokenAmount circ_after = add_or_throw(circulating_supply(s, inter), item.value);
    if (circ_after > item.locked_after) {
        throw ContractError(Reason::SafetyGateViolation,
                            "circulating after " + std::to_string(circ_after.units()) + " exceeds locked " +
                                std::to_string(item.locked_after.units()));
    }
}

/// One inbound item: gate, then delegate the unlock to SC_Bank.
inline void sc_inter_inbound(ExecContext& ctx, const Address& self, ScInter& inter, const TransferItem& item)
{
    if (item.kind != ItemKind::Inbound) throw ContractError(Reason::MalformedPayload);
    sc_inter_check_gate(ctx.state(), inter, item);
    auto& bank = ctx.contract<ScBank>(inter.sc_bank);
    sc_bank_release(ctx, inter.sc_bank, bank, self, item.to, item.value);
    inter.total_inbound = add_or_throw(inter.total_inbound, item.value);
}

namespace detail {

inline std::vector<std::string> release_items(ExecContext& ctx, const Address& self, ScInter& inter,
                                              const std::vector<TransferItem>& items)
{
    std::vector<std::string> results;
    for (const auto& item : items) {
        try {
            sc_inter_inbound(ctx, self, inter, item);
            results.emplace_back("ok");
        } catch (const ContractError& e) {
            results.emplace_back(to_string(e.reason()));
        }
    }
    return results;
}

} // namespace detail

/// Witness relay of token-chain deposits.
inline void sc_inter_transferring(ExecContext& ctx, const Address& self, ScInter& inter, const Address& witness,
                                  std::uint64_t round, const Transferring& t)
{
    check_transferring(self, t);
    const auto& bank = ctx.contract<ScBank>(inter.sc_bank);
    if (!bank.authorized_inter || *bank.authorized_inter != self) throw ContractError(Reason::NotAuthorized);
    if (!inter.votes.cast_or_throw(witness, round, t.subject)) return;
    inter.votes.mark_executed(t.subject);
    if (inter.per_transfer_approval) {
        inter.awaiting_approval[t.subject] = t.items;
        ctx.emit(self, ConsensusResultData{t.subject, "awaiting_owner_approval", inter.votes.round(), {}});
        return;
    }
    auto results = detail::release_items(ctx, self, inter, t.items);
    ctx.emit(self, ConsensusResultData{t.subject, "executed", inter.votes.round(), results});
}

/// Per-transfer mode: SC_Bank's owners approve the release of one batch.
inline void sc_inter_approve(ExecContext& ctx, const Address& self, ScInter& inter, const Address& owner,
                             const MultisigAction& action)
{
    const std::string prefix = "release:";
    if (action.action.rfind(prefix, 0) != 0) throw ContractError(Reason::MalformedPayload, action.action);
    Digest subject = Digest::from_hex(action.action.substr(prefix.size()));
    auto it = inter.awaiting_approval.find(subject);
    if (it == inter.awaiting_approval.end()) throw ContractError(Reason::MalformedPayload, "nothing awaiting approval");
    auto& bank = ctx.contract<ScBank>(inter.sc_bank);
    if (!bank.owners.approve(owner, action.action)) return;
    auto items = std::move(it->second);
    inter.awaiting_approval.erase(it);
    detail::release_items(ctx, self, inter, items);
}

/// Side -> token transfer request: the user's tokens move through SC_Inter
/// into SC_Bank, which announces the lock.
inline void sc_inter_outbound(ExecContext& ctx, const Address& self, ScInter& inter, const Transaction& tx,
                              const Address& destination)
{
    TokenAmount bank_balance = ctx.balance(inter.sc_bank);
    TokenAmount bound = sub_or_throw(inter.total_supply, bank_balance);
    if (tx.value > bound) {
        throw ContractError(Reason::ExceedsCirculating,
                            std::to_string(tx.value.units()) + " > " + std::to_string(bound.units()));
    }
    if (ctx.balance(tx.from) < tx.value) throw ContractError(Reason::InsufficientUserBalance);
    ctx.transfer(tx.from, self, tx.value);
    auto& bank = ctx.contract<ScBank>(inter.sc_bank);
    sc_bank_lock(ctx, inter.sc_bank, bank, self,
                 AssetsLockedData{ChainId{}, inter.next_request_id++, tx.from, destination, tx.value});
    inter.total_outbound = add_or_throw(inter.total_outbound, tx.value);
}

} // namespace bridgesim
