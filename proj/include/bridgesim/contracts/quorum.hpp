#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bridgesim/contracts/errors.hpp"
#include "bridgesim/core/types.hpp"

namespace bridgesim {

/// Smallest integer strictly greater than half of `n`.
constexpr std::uint32_t default_threshold(std::uint32_t n) { return n / 2 + 1; }

constexpr bool is_safe_threshold(std::uint32_t threshold, std::uint32_t n) { return 2 * threshold > n && threshold <= n; }

/// Distinct voters for one (round, subject) pair.
struct QuorumTally {
    std::uint64_t round = 0;
    Digest subject;
    std::uint32_t threshold = 0;
    std::set<Address> votes;

    bool reached() const { return votes.size() >= threshold; }
};

/// Per-contract vote bookkeeping. Votes count only for the contract's current
/// round; each witness counts once per subject; a subject executes once.
class VoteBook {
public:
    enum class Outcome { Counted, QuorumReached, Duplicate, StaleRound, UnknownWitness, AlreadyExecuted };

    struct Execution {
        std::uint64_t round;
        Digest subject;
        std::size_t votes;
    };

    VoteBook() = default;
    VoteBook(std::vector<Address> voters, std::uint32_t threshold)
        : voters_(voters.begin(), voters.end()), threshold_(threshold)
    {
    }

    Outcome cast(const Address& witness, std::uint64_t round, const Digest& subject)
    {
        if (!voters_.contains(witness)) return Outcome::UnknownWitness;
        if (round != round_) return Outcome::StaleRound;
        if (executed_.contains(subject)) return Outcome::AlreadyExecuted;
        auto& tally = tallies_[subject];
        tally.round = round_;
        tally.subject = subject;
        tally.threshold = threshold_;
        if (!tally.votes.insert(witness).second) return Outcome::Duplicate;
        return tally.votes.size() == threshold_ ? Outcome::QuorumReached : Outcome::Counted;
    }

    /// Rejecting variant used by contracts: anything but a counted vote aborts
    /// the transaction. Returns true when this vote completed the quorum.
    bool cast_or_throw(const Address& witness, std::uint64_t round, const Digest& subject)
    {
        switch (cast(witness, round, subject)) {
        case Outcome::Counted: return false;
        case Outcome::QuorumReached: return true;
        case Outcome::Duplicate: throw ContractError(Reason::DuplicateVote);
        case Outcome::StaleRound:
            throw ContractError(Reason::StaleRound,
                                "vote round " + std::to_string(round) + ", current " + std::to_string(round_));
        case Outcome::UnknownWitness: throw ContractError(Reason::UnknownWitness);
        case Outcome::AlreadyExecuted: throw ContractError(Reason::AlreadyExecuted);
        }
        return false;
    }

    void mark_executed(const Digest& subject)
    {
        auto it = tallies_.find(subject);
        executions_.push_back({round_, subject, it == tallies_.end() ? 0 : it->second.votes.size()});
        executed_.insert(subject);
        if (it != tallies_.end()) tallies_.erase(it);
    }

    /// Moves to the next round; tallies of the old round are discarded.
    void advance_round()
    {
        ++round_;
        tallies_.clear();
    }

    void forget(const Digest& subject) { tallies_.erase(subject); }

    std::uint64_t round() const { return round_; }
    std::uint32_t threshold() const { return threshold_; }
    const std::set<Address>& voters() const { return voters_; }
    bool is_voter(const Address& a) const { return voters_.contains(a); }
    bool executed(const Digest& subject) const { return executed_.contains(subject); }
    const std::vector<Execution>& executions() const { return executions_; }

    const QuorumTally* tally(const Digest& subject) const
    {
        auto it = tallies_.find(subject);
        return it == tallies_.end() ? nullptr : &it->second;
    }

private:
    std::set<Address> voters_;
    std::uint32_t threshold_ = 0;
    std::uint64_t round_ = 0;
    std::map<Digest, QuorumTally> tallies_;
    std::set<Digest> executed_;
    std::vector<Execution> executions_;
};

/// n-of-m owner approval of named actions.
class Multisig {
public:
    Multisig() = default;
    Multisig(std::vector<Address> owners, std::uint32_t required) : owners_(std::move(owners)), required_(required) {}

    bool is_owner(const Address& a) const { return std::find(owners_.begin(), owners_.end(), a) != owners_.end(); }

    /// Records an approval; returns whether the action is now satisfied.
    bool approve(const Address& owner, const std::string& action)
    {
        if (!is_owner(owner)) throw ContractError(Reason::NotOwner);
        collected_[action].insert(owner);
        return satisfied(action);
    }

    bool satisfied(const std::string& action) const { return approvals(action) >= required_; }

    std::size_t approvals(const std::string& action) const
    {
        auto it = collected_.find(action);
        return it == collected_.end() ? 0 : it->second.size();
    }

    std::set<Address> approvers(const std::string& action) const
    {
        auto it = collected_.find(action);
        return it == collected_.end() ? std::set<Address>{} : it->second;
    }

    const std::vector<Address>& owners() const { return owners_; }
    std::uint32_t required() const { return required_; }

private:
    std::vector<Address> owners_;
    std::uint32_t required_ = 2;
    std::map<std::string, std::set<Address>> collected_;
};

} // namespace bridgesim
