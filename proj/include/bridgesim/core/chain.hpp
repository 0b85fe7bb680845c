#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bridgesim/contracts/dispatch.hpp"
#include "bridgesim/contracts/state.hpp"

namespace bridgesim {

struct Receipt {
    bool accepted = true;
    std::string reason; // empty when accepted
};

struct Block {
    std::uint64_t height = 0;
    Digest parent_hash;
    std::uint64_t timestamp = 0;
    std::vector<Transaction> transactions;
    std::vector<Receipt> receipts;
    std::vector<Event> events;
    Digest hash;
};

inline Digest block_hash(std::uint64_t height, const Digest& parent, std::uint64_t timestamp,
                         const std::vector<Transaction>& txs)
{
    json body = json::array();
    for (const auto& tx : txs) body.push_back(to_json_value(tx));
    return canonical_digest(
        json{{"height", height}, {"parent_hash", parent}, {"timestamp", timestamp}, {"transactions", body}});
}

/// A single chain: blocks, per-height state snapshots and an index of
/// contract result events. Rejected transactions stay in the block with a
/// failed receipt and no effect.
class Chain {
public:
    Chain(ChainId id, ChainKind kind, ChainState genesis_state, Digest genesis_block_hash)
        : id_(id), kind_(kind)
    {
        Block g;
        g.hash = genesis_block_hash;
        blocks_.push_back(std::move(g));
        supply_ = genesis_state.total_balance();
        states_.push_back(std::move(genesis_state));
    }

    const ChainId& id() const { return id_; }
    ChainKind kind() const { return kind_; }
    std::uint64_t height() const { return blocks_.size() - 1; }
    const Block& block(std::uint64_t h) const { return blocks_.at(h); }
    const Block& head() const { return blocks_.back(); }
    const ChainState& state() const { return states_.back(); }
    const ChainState& state_at(std::uint64_t h) const { return states_.at(h); }
    TokenAmount supply() const { return supply_; }

    /// Executes `txs` on top of the head and appends the block.
    const Block& produce(std::vector<Transaction> txs, std::uint64_t timestamp)
    {
        Block b;
        b.height = height() + 1;
        b.parent_hash = head().hash;
        b.timestamp = timestamp;
        b.transactions = std::move(txs);
        ChainState s = state();
        for (std::size_t i = 0; i < b.transactions.size(); ++i) {
            ChainState attempt = s;
            std::vector<Event> events;
            ExecContext ctx(attempt, kind_, Origin{b.height, i}, timestamp, events);
            try {
                apply_transaction(ctx, b.transactions[i]);
                s = std::move(attempt);
                b.events.insert(b.events.end(), events.begin(), events.end());
                b.receipts.push_back({});
            } catch (const ContractError& e) {
                b.receipts.push_back({false, e.what()});
            }
        }
        ExecContext end(s, kind_, Origin{b.height, b.transactions.size()}, timestamp, b.events);
        apply_block_end(end);
        if (s.total_balance() != supply_) throw std::logic_error("block changed the token supply");
        b.hash = block_hash(b.height, b.parent_hash, b.timestamp, b.transactions);
        index(b);
        blocks_.push_back(std::move(b));
        states_.push_back(std::move(s));
        return blocks_.back();
    }

    /// Replaces the top `depth` blocks by re-executing `replacement`
    /// (transactions and timestamp per block). Returns the removed blocks.
    /// Depth 0 just appends the replacement.
    std::vector<Block> reorg(std::uint64_t depth, std::vector<std::pair<std::vector<Transaction>, std::uint64_t>> replacement)
    {
        if (depth > height()) throw ContractError(Reason::InvalidReorg, "depth exceeds the chain height");
        if (depth == 0) {
            for (auto& [txs, ts] : replacement) produce(std::move(txs), ts);
            return {};
        }
        std::vector<Block> removed(blocks_.end() - static_cast<std::ptrdiff_t>(depth), blocks_.end());
        blocks_.resize(blocks_.size() - depth);
        states_.resize(states_.size() - depth);
        rebuild_index();
        Digest fork_point = head().hash;
        for (auto& [txs, ts] : replacement) produce(std::move(txs), ts);
        if (height() >= removed.front().height && block(removed.front().height).parent_hash != fork_point) {
            throw ContractError(Reason::InvalidReorg, "replacement does not link to the fork point");
        }
        return removed;
    }

    /// Height of the block holding the result event for (contract, subject).
    std::optional<std::uint64_t> result_height(const Address& contract, const Digest& subject) const
    {
        auto it = results_.find({contract, subject});
        if (it == results_.end()) return std::nullopt;
        return it->second;
    }

    /// Round reported by the contract's latest result event, with its height.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> latest_round(const Address& contract) const
    {
        auto it = rounds_.find(contract);
        if (it == rounds_.end()) return std::nullopt;
        return it->second;
    }

    /// Confirmation depth of height h relative to the head.
    std::uint64_t depth_of(std::uint64_t h) const { return h > height() ? 0 : height() - h; }

private:
    void index(const Block& b)
    {
        for (const auto& e : b.events) {
            if (auto s = result_subject(e)) {
                results_.emplace(std::pair{e.contract, *s}, b.height);
                rounds_[e.contract] = {b.height, *result_round(e)};
            }
        }
    }

    void rebuild_index()
    {
        results_.clear();
        rounds_.clear();
        for (const auto& b : blocks_) index(b);
    }

    ChainId id_;
    ChainKind kind_;
    TokenAmount supply_;
    std::vector<Block> blocks_;
    std::vector<ChainState> states_;
    std::map<std::pair<Address, Digest>, std::uint64_t> results_;
    std::map<Address, std::pair<std::uint64_t, std::uint64_t>> rounds_;
};

} // namespace bridgesim
