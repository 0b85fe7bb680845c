#pragma once

#include <string>
#include <vector>

#include "bridgesim/contracts/sc_id.hpp"
#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

/// Digest the Confirm votes of a registration bind to.
inline Digest registration_subject(const Address& sc_a, const PendingRegistration& p)
{
    return canonical_digest(json{{"kind", "registration"},
                                 {"sc_a", sc_a},
                                 {"chain_id", p.chain_id},
                                 {"request_id", p.request_id},
                                 {"creator", p.creator},
                                 {"creator_side", p.creator_side},
                                 {"amount", p.amount},
                                 {"genesis_hash", p.genesis_hash}});
}

namespace detail {

// Splits `fee` evenly among `voters`; the remainder stays with SC_A.
inline void pay_compensation(ExecContext& ctx, const Address& self, TokenAmount fee, const std::set<Address>& voters)
{
    if (voters.empty() || fee.is_zero()) return;
    TokenAmount share{fee.units() / voters.size()};
    for (const auto& v : voters) ctx.transfer(self, v, share);
}

inline std::set<Address> confirm_voters(const ScA& a, const PendingRegistration& p)
{
    std::set<Address> voters = p.dissent;
    if (auto t = a.votes.tally(p.subject)) voters.insert(t->votes.begin(), t->votes.end());
    return voters;
}

inline void revert_registration(ExecContext& ctx, const Address& self, ScA& a)
{
    PendingRegistration p = *a.pending;
    auto voters = confirm_voters(a, p);
    a.locked = sub_or_throw(a.locked, p.amount);
    ctx.transfer(self, p.creator, p.amount);
    pay_compensation(ctx, self, p.fee, voters);
    a.pending.reset();
    a.votes.advance_round();
    ++a.reverted_registrations;
    ctx.emit(self, RegistrationResultData{p.chain_id, p.subject, false, a.votes.round(), p.amount});
}

} // namespace detail

/// Creator's registration request. Locks attached - fee and announces the
/// request to the witnesses.
inline void sc_a_request_registration(ExecContext& ctx, const Address& self, ScA& a, const Transaction& tx,
                                      const RegistrationRequest& req)
{
    if (a.registered) throw ContractError(Reason::AlreadyRegistered);
    if (a.pending) throw ContractError(Reason::RegistrationPending);
    if (tx.value <= a.compensation_fee) {
        throw ContractError(Reason::FeeNotCovered, "attached tokens must exceed the compensation fee");
    }
    TokenAmount amount = sub_or_throw(tx.value, a.compensation_fee);
    if (a.variant == SideVariant::Gasless && amount < a.entrance_fee_minimum) {
        throw ContractError(Reason::BelowEntranceFeeMinimum, std::to_string(amount.units()) + " < " +
                                                                 std::to_string(a.entrance_fee_minimum.units()));
    }
    ctx.transfer(tx.from, self, tx.value);
    a.locked = add_or_throw(a.locked, amount);

    PendingRegistration p;
    p.request_id = a.next_request_id++;
    p.chain_id = req.chain_id;
    p.creator = tx.from;
    p.creator_side = req.creator_side;
    p.attached = tx.value;
    p.amount = amount;
    p.fee = a.compensation_fee;
    p.genesis_hash = req.genesis_hash;
    p.deadline = ctx.timestamp() + a.timeout;
    p.subject = registration_subject(self, p);
    a.pending = p;

    ArrivalData ev;
    ev.kind = ArrivalKind::Registration;
    ev.chain_id = req.chain_id;
    ev.request_id = p.request_id;
    ev.from = tx.from;
    ev.to = req.creator_side;
    ev.value = amount;
    ev.locked_after = a.locked;
    ev.genesis_hash = req.genesis_hash;
    ev.subject = p.subject;
    ctx.emit(self, ev);
}

/// A witness's Confirm vote. Reaching the threshold of true votes registers
/// the chain id in SC_ID; a duplicate id reverts the request.
inline void sc_a_confirm(ExecContext& ctx, const Address& self, ScA& a, const Address& witness, std::uint64_t round,
                         const Confirm& vote)
{
    if (!a.pending) throw ContractError(Reason::NoPendingRegistration);
    if (!a.votes.is_voter(witness)) throw ContractError(Reason::UnknownWitness);
    if (round != a.votes.round()) throw ContractError(Reason::StaleRound);
    if (vote.subject != a.pending->subject) throw ContractError(Reason::SubjectMismatch);

    if (!vote.verdict) {
        auto t = a.votes.tally(vote.subject);
        if ((t && t->votes.contains(witness)) || !a.pending->dissent.insert(witness).second) {
            throw ContractError(Reason::DuplicateVote);
        }
        return;
    }
    if (a.pending->dissent.contains(witness)) throw ContractError(Reason::DuplicateVote);
    if (!a.votes.cast_or_throw(witness, round, vote.subject)) return;

    auto& id = ctx.contract<ScId>(a.sc_id);
    const PendingRegistration& p = *a.pending;
    bool appended = sc_id_update(ctx, a.sc_id, id,
                                 RegistryUpdate{p.chain_id, self, p.creator_side, p.amount, p.request_id},
                                 authorize_updater_action(self));
    if (!appended) {
        detail::revert_registration(ctx, self, a);
        return;
    }
    std::set<Address> approvers = a.votes.tally(p.subject)->votes;
    a.votes.mark_executed(p.subject);
    a.registered = true;
    a.creator = p.creator;
    a.creator_side = p.creator_side;
    a.registration_amount = p.amount;
    detail::pay_compensation(ctx, self, p.fee, approvers);
    ctx.emit(self, RegistrationResultData{p.chain_id, p.subject, true, a.votes.round(), TokenAmount{}});
    a.pending.reset();
}

/// End-of-block deadline check: an unconfirmed registration past its
/// deadline is reverted to the creator, minus the compensation fee.
inline void sc_a_on_block_end(ExecContext& ctx, const Address& self, ScA& a)
{
    if (a.pending && ctx.timestamp() >= a.pending->deadline) detail::revert_registration(ctx, self, a);
}

/// Subsequent token -> side transfer: the user's tokens are locked here.
inline void sc_a_deposit(ExecContext& ctx, const Address& self, ScA& a, const Transaction& tx, const Address& destination)
{
    if (!a.registered) throw ContractError(Reason::NotRegistered);
    ctx.transfer(tx.from, self, tx.value);
    a.locked = add_or_throw(a.locked, tx.value);
    a.total_deposited = add_or_throw(a.total_deposited, tx.value);

    ArrivalData ev;
    ev.kind = ArrivalKind::Deposit;
    ev.chain_id = a.chain_id;
    ev.request_id = a.next_request_id++;
    ev.from = tx.from;
    ev.to = destination;
    ev.value = tx.value;
    ev.locked_after = a.locked;
    ctx.emit(self, ev);
}

/// Releases `value` of the locked tokens to `to`.
inline void sc_a_unlock(ExecContext& ctx, const Address& self, ScA& a, const Address& to, TokenAmount value)
{
    if (value > a.locked) {
        throw ContractError(Reason::ExceedsLocked,
                            std::to_string(value.units()) + " > locked " + std::to_string(a.locked.units()));
    }
    a.locked = sub_or_throw(a.locked, value);
    a.total_unlocked = add_or_throw(a.total_unlocked, value);
    ctx.transfer(self, to, value);
}

inline void check_transferring(const Address& self, const Transferring& t)
{
    if (t.target != self) throw ContractError(Reason::MalformedPayload, "batch addressed to another contract");
    if (transferring_subject(t) != t.subject) throw ContractError(Reason::SubjectMismatch);
}

/// Witness relay of side-chain locks. At quorum every outbound item is
/// unlocked; items failing their guard are reported, not applied.
inline void sc_a_transferring(ExecContext& ctx, const Address& self, ScA& a, const Address& witness,
                              std::uint64_t round, const Transferring& t)
{
    check_transferring(self, t);
    if (!a.votes.cast_or_throw(witness, round, t.subject)) return;
    std::vector<std::string> results;
    for (const auto& item : t.items) {
        if (item.kind != ItemKind::Outbound) {
            results.emplace_back(to_string(Reason::MalformedPayload));
            continue;
        }
        try {
            sc_a_unlock(ctx, self, a, item.to, item.value);
            results.emplace_back("ok");
        } catch (const ContractError& e) {
            results.emplace_back(to_string(e.reason()));
        }
    }
    a.votes.mark_executed(t.subject);
    ctx.emit(self, ConsensusResultData{t.subject, "executed", a.votes.round(), results});
}

} // namespace bridgesim
