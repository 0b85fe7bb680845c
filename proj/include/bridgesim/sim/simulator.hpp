#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "bridgesim/core/chain.hpp"
#include "bridgesim/sim/scenario.hpp"
#include "bridgesim/sim/trace.hpp"
#include "bridgesim/witness/witness.hpp"

namespace bridgesim {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_ticks;
    std::optional<GateMode> mode;
    std::optional<std::uint32_t> threshold_override; // recorded in the trace header
};

struct InvariantResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct InvariantReport {
    std::uint64_t tick = 0;
    bool final = false;
    std::vector<InvariantResult> results;

    bool all_pass() const
    {
        return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    }
};

struct RunStats {
    std::uint64_t blocks = 0;
    std::uint64_t sends = 0;
    std::uint64_t drops = 0;
    std::uint64_t dups = 0;
    std::uint64_t resends = 0;
    std::uint64_t batches = 0;
    std::uint64_t subsequent_after_resend = 0; // subsequent-gate batches formed after a resend
    std::uint64_t reorgs = 0;
    std::uint64_t rejected_txs = 0;
};

struct RunResult {
    Trace trace;
    std::vector<InvariantReport> checks;
    bool invariants_ok = true;
    bool quiescent = false;
    std::uint64_t end_tick = 0;
    RunStats stats;
    json summary;

    /// Names of invariants that failed in any check.
    std::set<std::string> failed() const
    {
        std::set<std::string> out;
        for (const auto& c : checks) {
            for (const auto& r : c.results) {
                if (!r.pass) out.insert(r.name);
            }
        }
        return out;
    }
};

inline std::string_view to_string_mode(GateMode m) { return to_string(m); }

/// Deterministic discrete-event run of one scenario.
class Simulator {
public:
    explicit Simulator(Scenario sc, RunOptions opts = {}) : sc_(std::move(sc)), opts_(opts), rng_(0)
    {
        if (opts_.seed) sc_.seed = *opts_.seed;
        if (opts_.max_ticks) sc_.max_ticks = *opts_.max_ticks;
        if (opts_.mode) sc_.mode = *opts_.mode;
        if (opts_.threshold_override) {
            for (auto& s : sc_.sides) s.threshold = *opts_.threshold_override;
        }
        rng_ = Rng(sc_.seed);
        build();
    }

    const Scenario& scenario() const { return sc_; }
    const Chain& token() const { return token_; }
    std::size_t side_count() const { return sides_.size(); }
    const Chain& side(std::size_t i) const { return sides_.at(i).chain; }
    bool launched(std::size_t i) const { return sides_.at(i).launched; }
    const std::vector<Witness>& witnesses() const { return witnesses_; }

    RunResult run()
    {
        header();
        std::uint64_t last_scheduled = 0;
        for (const auto& w : sc_.workload) last_scheduled = std::max(last_scheduled, w.tick);
        for (const auto& r : sc_.faults.reorgs) {
            if (r.tick) last_scheduled = std::max(last_scheduled, *r.tick);
        }
        std::uint64_t t = 0;
        for (;; ++t) {
            now_ = t;
            while (!queue_.empty() && queue_.top().tick == t) {
                QueueItem item = queue_.top();
                queue_.pop();
                fire(item);
            }
            housekeeping();
            bool q = quiescent();
            if (q && dirty_) {
                dirty_ = false;
                check(false);
            }
            if ((q && t >= last_scheduled) || t >= sc_.max_ticks) {
                result_.quiescent = q;
                break;
            }
        }
        result_.end_tick = t;
        check(true);
        result_.summary = summary();
        result_.trace.add(t, "end", "",
                          {{"quiescent", result_.quiescent},
                           {"invariants_ok", result_.invariants_ok},
                           {"summary", result_.summary}});
        return std::move(result_);
    }

private:
    enum class Kind { Workload, Produce, Wake, Deliver, Reorg };

    struct QueueItem {
        std::uint64_t tick = 0;
        std::uint64_t seq = 0;
        Kind kind = Kind::Workload;
        std::size_t index = 0; // workload item, chain index, witness or reorg plan
        Transaction tx;

        bool operator>(const QueueItem& o) const { return std::tie(tick, seq) > std::tie(o.tick, o.seq); }
    };

    struct SideRuntime {
        const SideChainConfig* cfg;
        Chain chain;
        BridgeLink link;
        bool launched = false;
        bool bank_auth_sent = false;
        bool suicide_sent = false;
        std::set<Digest> releases_sent;
        std::set<Address> honest_side_addrs;
    };

    // chain index: 0 = token chain, i + 1 = side chain i
    Chain& chain(std::size_t ix) { return ix == 0 ? token_ : sides_[ix - 1].chain; }
    std::string chain_name(std::size_t ix) const
    {
        return ix == 0 ? sc_.token.chain_id.hex() : sides_[ix - 1].cfg->genesis.chain_id.hex();
    }
    std::size_t chain_index(const ChainId& id) const
    {
        if (id == sc_.token.chain_id) return 0;
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            if (sides_[i].cfg->genesis.chain_id == id) return i + 1;
        }
        return 0;
    }

    void push(std::uint64_t tick, Kind kind, std::size_t index, Transaction tx = {})
    {
        queue_.push({tick, seq_++, kind, index, std::move(tx)});
    }

    static ChainState token_genesis_state(const Scenario& sc)
    {
        ChainState s;
        TokenAmount held;
        for (const auto& [a, v] : sc.token.accounts) {
            s.accounts[a] = v;
            held = add_or_throw(held, v);
        }
        TokenAmount unmined = sub_or_throw(sc.token.total_supply, held);
        if (!unmined.is_zero()) s.accounts[address_from_label("unmined:" + sc.token.chain_id.hex())] = unmined;
        s.contracts[sc.contracts.sc_id] = ScId{{}, Multisig(sc.contracts.sc_id_owners, sc.contracts.sc_id_required)};
        for (const auto& side : sc.sides) {
            ScA a;
            a.chain_id = side.genesis.chain_id;
            a.variant = side.genesis.variant;
            a.sc_id = sc.contracts.sc_id;
            std::vector<Address> voters;
            for (const auto& w : sc.witnesses_of(side.genesis.chain_id)) voters.push_back(w.token_address);
            a.votes = VoteBook(voters, sc.threshold_of(side));
            a.compensation_fee = sc.contracts.compensation_fee;
            a.entrance_fee_minimum = sc.contracts.entrance_fee_minimum;
            a.timeout = sc.contracts.registration_deadline();
            s.contracts[side.sc_a] = a;
        }
        return s;
    }

    static Digest token_genesis_hash(const Scenario& sc)
    {
        json acc = json::object();
        for (const auto& [a, v] : sc.token.accounts) acc[a.hex()] = v;
        return canonical_digest(
            json{{"chain_id", sc.token.chain_id}, {"total_supply", sc.token.total_supply}, {"accounts", acc}});
    }

    ChainState side_genesis_state(const SideChainConfig& side) const
    {
        ChainState s;
        const GenesisSpec& g = side.genesis;
        VoteBook votes(g.witnesses, sc_.threshold_of(side));
        Multisig owners(side.owners, side.multisig_required);
        if (g.variant == SideVariant::Gasless) {
            s.accounts[g.sc_register] = g.bal_resv;
            s.accounts[g.sc_bank] = g.bal_bank;
            s.contracts[g.sc_register] = ScRegister{votes, owners, false, false};
            ScInter inter;
            inter.votes = votes;
            inter.sc_bank = g.sc_bank;
            inter.sc_register = g.sc_register;
            inter.total_supply = sc_.token.total_supply;
            inter.entrance_fee = g.bal_resv;
            inter.mode = sc_.mode;
            inter.per_transfer_approval = side.bank_per_transfer_approval;
            s.contracts[g.sc_inter] = inter;
            s.contracts[g.sc_bank] = ScBank{std::nullopt, owners, 0, 0};
        } else {
            ScConsensus c;
            c.votes = votes;
            c.sc_trading = g.sc_trading;
            c.owners = owners;
            s.contracts[g.sc_register] = c;
            s.contracts[g.sc_trading] = ScTrading{g.sc_register, owners, {}};
        }
        return s;
    }

    void build()
    {
        token_ = Chain(sc_.token.chain_id, ChainKind::TokenChain, token_genesis_state(sc_), token_genesis_hash(sc_));
        sides_.reserve(sc_.sides.size());
        for (const auto& side : sc_.sides) {
            ChainKind kind = side.genesis.variant == SideVariant::Gasless ? ChainKind::GaslessSideChain
                                                                          : ChainKind::NativeGasSideChain;
            BridgeLink link{sc_.token.chain_id, side.genesis.chain_id, side.genesis.variant, side.sc_a,
                            sc_.contracts.sc_id, side.genesis, sc_.token.omega, side.omega};
            sides_.push_back({&side, Chain(side.genesis.chain_id, kind, side_genesis_state(side), genesis_hash(side.genesis)),
                              link, false, false, false, {}, {}});
        }
        mempools_.resize(sides_.size() + 1);
        for (std::size_t i = 0; i < sc_.witnesses.size(); ++i) {
            const auto& w = sc_.witnesses[i];
            std::size_t six = chain_index(w.chain_id) - 1;
            witnesses_.emplace_back(w, sides_[six].link, sc_.contracts.timeout_t, sc_.contracts.resend_sleep_T);
            witness_side_.push_back(six);
            if (w.behavior == Behavior::Honest) {
                honest_addrs_.insert(w.token_address);
                sides_[six].honest_side_addrs.insert(w.side_address);
            }
        }
        for (std::size_t i = 0; i < sc_.workload.size(); ++i) push(sc_.workload[i].tick, Kind::Workload, i);
        for (std::size_t i = 0; i < sc_.faults.reorgs.size(); ++i) {
            if (sc_.faults.reorgs[i].tick) push(*sc_.faults.reorgs[i].tick, Kind::Reorg, i);
        }
        fired_triggers_.assign(sc_.faults.reorgs.size(), false);
        push(sc_.token.block_interval, Kind::Produce, 0);
        for (std::size_t i = 0; i < witnesses_.size(); ++i) push(1, Kind::Wake, i);
    }

    void header()
    {
        json scenario = sc_.source;
        result_.trace.add(0, "header", "",
                          {{"artifact_version", artifact_version},
                           {"digest_algorithm", digest_algorithm},
                           {"seed", sc_.seed},
                           {"mode", to_string(sc_.mode)},
                           {"max_ticks", sc_.max_ticks},
                           {"threshold_override", opts_.threshold_override ? json(*opts_.threshold_override) : json()},
                           {"scenario", scenario},
                           {"scenario_digest", canonical_digest(scenario)}});
        // tick-0 owner actions: let every bridge head update the registry
        for (const auto& side : sides_) {
            for (const auto& owner : sc_.contracts.sc_id_owners) {
                Transaction tx;
                tx.from = owner;
                tx.to = sc_.contracts.sc_id;
                tx.payload = MultisigAction{authorize_updater_action(side.link.sc_a)};
                submit(0, std::move(tx), "owner");
            }
        }
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            if (sides_[i].cfg->genesis.variant == SideVariant::NativeGas) launch(i);
        }
    }

    void submit(std::size_t ix, Transaction tx, std::string_view origin)
    {
        if (ix > 0 && !sides_[ix - 1].launched) {
            // no block will ever include it
            result_.trace.add(now_, "discard", chain_name(ix),
                              {{"origin", origin}, {"tx", to_json_value(tx)}, {"reason", "chain_not_launched"}});
            return;
        }
        result_.trace.add(now_, "submit", chain_name(ix), {{"origin", origin}, {"tx", to_json_value(tx)}});
        mempools_[ix].push_back(std::move(tx));
    }

    void launch(std::size_t i)
    {
        auto& side = sides_[i];
        side.launched = true;
        result_.trace.add(now_, "launch", chain_name(i + 1), {{"initial_height", side.cfg->initial_height}});
        for (std::uint64_t h = 0; h < side.cfg->initial_height; ++h) produce(i + 1, {});
        push(now_ + side.cfg->block_interval, Kind::Produce, i + 1);
        if (side.cfg->genesis.variant == SideVariant::Gasless) {
            for (const auto& owner : side.cfg->owners) {
                Transaction tx;
                tx.from = owner;
                tx.to = side.cfg->genesis.sc_bank;
                tx.payload = MultisigAction{authorize_inter_action(side.cfg->genesis.sc_inter)};
                submit(i + 1, std::move(tx), "owner");
            }
            side.bank_auth_sent = true;
        }
    }

    void record_block(std::size_t ix, const Block& b, bool replacement)
    {
        ++result_.stats.blocks;
        json txs = json::array();
        for (std::size_t k = 0; k < b.transactions.size(); ++k) {
            json t = to_json_value(b.transactions[k]);
            if (!b.receipts[k].accepted) {
                t["rejected"] = b.receipts[k].reason;
                ++result_.stats.rejected_txs;
            }
            txs.push_back(std::move(t));
        }
        json events = json::array();
        for (const auto& e : b.events) events.push_back(to_json_value(e));
        result_.trace.add(now_, "block", chain_name(ix),
                          {{"height", b.height},
                           {"hash", b.hash},
                           {"parent_hash", b.parent_hash},
                           {"timestamp", b.timestamp},
                           {"replacement", replacement},
                           {"transactions", txs},
                           {"events", events}});
        if (!b.transactions.empty()) dirty_ = true;
        check_vote_binding(ix, b);
    }

    void produce(std::size_t ix, std::vector<Transaction> txs, bool replacement = false)
    {
        const Block& b = chain(ix).produce(std::move(txs), now_);
        record_block(ix, b, replacement);
    }

    void fire(const QueueItem& item)
    {
        switch (item.kind) {
        case Kind::Workload: workload(sc_.workload[item.index]); break;
        case Kind::Produce: {
            std::vector<Transaction> txs;
            txs.swap(mempools_[item.index]);
            produce(item.index, std::move(txs));
            std::uint64_t interval =
                item.index == 0 ? sc_.token.block_interval : sides_[item.index - 1].cfg->block_interval;
            push(now_ + interval, Kind::Produce, item.index);
            break;
        }
        case Kind::Wake: wake(item.index); break;
        case Kind::Deliver:
            --in_flight_;
            if (item.index > 0 && !sides_[item.index - 1].launched) break;
            result_.trace.add(now_, "deliver", chain_name(item.index), {{"tx", transaction_digest(item.tx)}});
            mempools_[item.index].push_back(item.tx);
            break;
        case Kind::Reorg: reorg(sc_.faults.reorgs[item.index]); break;
        }
    }

    void workload(const WorkItem& w)
    {
        Transaction tx;
        tx.from = w.from;
        tx.value = w.value;
        std::size_t ix = 0;
        const SideChainConfig* side = w.action == WorkAction::Transfer ? nullptr : sc_.side(w.chain_id);
        switch (w.action) {
        case WorkAction::Register:
            tx.to = side->sc_a;
            tx.payload = RegistrationRequest{w.chain_id, w.genesis_hash.value_or(sha256(side->genesis_text)), w.to};
            break;
        case WorkAction::Deposit:
            tx.to = side->sc_a;
            tx.payload = UserTransfer{w.to};
            break;
        case WorkAction::Withdraw:
            ix = chain_index(w.chain_id);
            tx.gasprice = 1;
            if (side->genesis.variant == SideVariant::Gasless) {
                tx.to = side->genesis.sc_inter;
                tx.payload = UserTransfer{w.to};
            } else {
                tx.to = side->genesis.sc_register;
                tx.value = {};
                tx.payload = TradingAction{TradingAction::Op::Withdraw, w.to, w.value};
            }
            break;
        case WorkAction::Trade:
            ix = chain_index(w.chain_id);
            tx.gasprice = 1;
            if (side->genesis.variant == SideVariant::Gasless) {
                tx.to = w.to;
                tx.payload = UserTransfer{};
            } else {
                tx.to = side->genesis.sc_trading;
                tx.value = {};
                tx.payload = TradingAction{TradingAction::Op::Transfer, w.to, w.value};
            }
            break;
        case WorkAction::IotRecord:
            ix = chain_index(w.chain_id);
            tx.gasprice = 1;
            tx.to = w.to;
            tx.value = {};
            tx.payload = IoTRecord{w.data};
            break;
        case WorkAction::Transfer:
            tx.to = w.to;
            tx.payload = UserTransfer{};
            break;
        }
        submit(ix, std::move(tx), "workload");
    }

    void wake(std::size_t wi)
    {
        push(now_ + 1, Kind::Wake, wi);
        std::size_t six = witness_side_[wi];
        auto& side = sides_[six];
        WitnessView view{token_, side.chain, [this](const ChainId& id) -> std::optional<std::string> {
                             const SideChainConfig* s = sc_.side(id);
                             if (!s || !s->publish_genesis) return std::nullopt;
                             return s->genesis_text;
                         }};
        WakeResult r = witnesses_[wi].wake(now_, view);
        for (auto& n : r.notes) {
            if (n.kind == "batch") {
                ++result_.stats.batches;
                if (n.payload["gate"] == "subsequent" && resend_seen_) ++result_.stats.subsequent_after_resend;
            }
            if (n.kind == "resend") {
                ++result_.stats.resends;
                resend_seen_ = true;
            }
            result_.trace.add(now_, n.kind, chain_name(n.token_chain ? 0 : six + 1), std::move(n.payload));
        }
        for (auto& out : r.sends) network_send(out.to_token_chain ? 0 : six + 1, std::move(out.tx));
    }

    void network_send(std::size_t ix, Transaction tx)
    {
        ++result_.stats.sends;
        Digest d = transaction_digest(tx);
        result_.trace.add(now_, "send", chain_name(ix), {{"tx", to_json_value(tx)}, {"digest", d}});
        auto& dropped = drop_counts_[d];
        if (dropped < sc_.faults.max_drops_per_message && rng_.chance(sc_.faults.drop_rate)) {
            ++dropped;
            ++result_.stats.drops;
            result_.trace.add(now_, "drop", chain_name(ix), {{"tx", d}, {"count", dropped}});
            return;
        }
        std::uint64_t delay = 1 + rng_.below(sc_.faults.max_delay);
        ++in_flight_;
        push(now_ + delay, Kind::Deliver, ix, tx);
        if (rng_.chance(sc_.faults.dup_rate)) {
            std::uint64_t d2 = 1 + rng_.below(sc_.faults.max_delay);
            ++in_flight_;
            ++result_.stats.dups;
            result_.trace.add(now_, "dup", chain_name(ix), {{"tx", d}, {"delay", d2}});
            push(now_ + d2, Kind::Deliver, ix, std::move(tx));
        }
    }

    static bool excluded(const Transaction& tx, const std::vector<PayloadKind>& ex)
    {
        return std::find(ex.begin(), ex.end(), payload_kind(tx.payload)) != ex.end();
    }

    /// Replaces the top `depth` blocks. Replacement block i carries the
    /// surviving transactions of removed block i-1 (the first is empty), so
    /// every surviving transaction lands one block later; the top block's
    /// survivors return to the mempool. Timestamps are kept.
    void reorg(const ReorgPlan& plan)
    {
        std::size_t ix = chain_index(plan.chain);
        Chain& c = chain(ix);
        json info{{"depth", plan.depth}, {"height", c.height()}};
        if (plan.depth == 0 || plan.depth > c.height() || (ix > 0 && !sides_[ix - 1].launched)) {
            info["applied"] = false;
            result_.trace.add(now_, "reorg", chain_name(ix), info);
            return;
        }
        std::uint64_t base = c.height() - plan.depth;
        std::vector<std::vector<Transaction>> kept;
        std::vector<std::uint64_t> stamps;
        json removed = json::array();
        for (std::uint64_t h = base + 1; h <= c.height(); ++h) {
            const Block& b = c.block(h);
            removed.push_back(b.hash);
            stamps.push_back(b.timestamp);
            std::vector<Transaction> keep;
            for (const auto& tx : b.transactions) {
                if (!excluded(tx, plan.exclude)) keep.push_back(tx);
            }
            kept.push_back(std::move(keep));
        }
        std::vector<std::pair<std::vector<Transaction>, std::uint64_t>> replacement;
        replacement.emplace_back(std::vector<Transaction>{}, stamps[0]);
        for (std::size_t k = 1; k < kept.size(); ++k) replacement.emplace_back(kept[k - 1], stamps[k]);
        auto& pool = mempools_[ix];
        pool.insert(pool.begin(), kept.back().begin(), kept.back().end());
        c.reorg(plan.depth, std::move(replacement));
        ++result_.stats.reorgs;
        dirty_ = true;
        info["applied"] = true;
        info["removed"] = removed;
        result_.trace.add(now_, "reorg", chain_name(ix), info);
        for (std::uint64_t h = base + 1; h <= c.height(); ++h) record_block(ix, c.block(h), true);
    }

    void owner_tx(std::size_t ix, const Address& from, const Address& to, std::string action)
    {
        Transaction tx;
        tx.from = from;
        tx.to = to;
        tx.payload = MultisigAction{std::move(action)};
        submit(ix, std::move(tx), "owner");
    }

    void housekeeping()
    {
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            auto& side = sides_[i];
            const GenesisSpec& g = side.cfg->genesis;
            if (!side.launched) {
                const ScA* a = token_.state().find<ScA>(side.link.sc_a);
                if (a && a->registered) launch(i);
                continue;
            }
            if (g.variant != SideVariant::Gasless) continue;
            const ChainState& s = side.chain.state();
            const ScRegister* reg = s.find<ScRegister>(g.sc_register);
            if (reg && reg->paid_out && !side.suicide_sent) {
                for (const auto& o : side.cfg->owners) owner_tx(i + 1, o, g.sc_register, suicide_action);
                side.suicide_sent = true;
            }
            const ScInter* inter = s.find<ScInter>(g.sc_inter);
            if (inter) {
                for (const auto& [subject, _] : inter->awaiting_approval) {
                    if (!side.releases_sent.insert(subject).second) continue;
                    for (const auto& o : side.cfg->owners) owner_tx(i + 1, o, g.sc_inter, release_action(subject));
                }
            }
        }
        for (std::size_t k = 0; k < sc_.faults.reorgs.size(); ++k) {
            const auto& plan = sc_.faults.reorgs[k];
            if (plan.trigger.empty() || fired_triggers_[k]) continue;
            if (trigger_met(plan)) {
                fired_triggers_[k] = true;
                reorg(plan);
            }
        }
    }

    bool trigger_met(const ReorgPlan& plan) const
    {
        for (const auto& side : sides_) {
            if (plan.trigger == "first_unlock") {
                const ScA* a = token_.state().find<ScA>(side.link.sc_a);
                if (a && !a->total_unlocked.is_zero()) return true;
            } else if (plan.trigger == "first_inbound") {
                if (!side.launched) continue;
                const auto& g = side.cfg->genesis;
                const ChainState& s = side.chain.state();
                if (auto in = s.find<ScInter>(g.sc_inter); in && !in->total_inbound.is_zero()) return true;
                if (auto c = s.find<ScConsensus>(g.sc_register); c && !c->total_inbound.is_zero()) return true;
            }
        }
        return false;
    }

    bool quiescent() const
    {
        if (in_flight_ > 0) return false;
        for (std::size_t ix = 0; ix < mempools_.size(); ++ix) {
            if (!mempools_[ix].empty()) return false;
        }
        for (const auto& side : sides_) {
            const ScA* a = token_.state().find<ScA>(side.link.sc_a);
            if (a && a->pending) return false;
        }
        std::vector<std::vector<std::optional<std::uint64_t>>> last(sides_.size());
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            const auto& side = sides_[i];
            last[i] = {last_relevant_height(token_, side.link, Direction::TokenToSide),
                       last_relevant_height(side.chain, side.link, Direction::SideToToken)};
            if (!side.launched) continue;
            const auto& g = side.cfg->genesis;
            if (g.variant == SideVariant::Gasless) {
                const ChainState& s = side.chain.state();
                const ScRegister* reg = s.find<ScRegister>(g.sc_register);
                if (reg && reg->paid_out && !side.suicide_sent) return false;
                const ScInter* inter = s.find<ScInter>(g.sc_inter);
                if (inter && !inter->awaiting_approval.empty()) return false;
            }
        }
        for (std::size_t wi = 0; wi < witnesses_.size(); ++wi) {
            if (witnesses_[wi].config().behavior != Behavior::Honest) continue;
            if (!witnesses_[wi].caught_up(last[witness_side_[wi]])) return false;
        }
        return true;
    }

    // ---------------------------------------------------------------------
    // invariants
    // ---------------------------------------------------------------------

    void check_vote_binding(std::size_t ix, const Block& b)
    {
        for (const auto& tx : b.transactions) {
            auto t = std::get_if<Transferring>(&tx.payload);
            if (!t) continue;
            bool honest = ix == 0 ? honest_addrs_.contains(tx.from) : sides_[ix - 1].honest_side_addrs.contains(tx.from);
            if (honest && transferring_subject(*t) != t->subject) {
                binding_violations_.push_back("honest vote from " + tx.from.hex() + " does not bind its batch");
            }
        }
    }

    static std::string amount_str(TokenAmount a) { return std::to_string(a.units()); }

    InvariantReport evaluate() const
    {
        InvariantReport rep;
        rep.tick = now_;
        auto add = [&](std::string name, std::vector<std::string> problems) {
            std::string detail;
            for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
            rep.results.push_back({std::move(name), problems.empty(), detail});
        };

        std::vector<std::string> supply, peg, complete, unique, drained, quorum, access, windows;
        if (token_.state().total_balance() != token_.supply()) supply.push_back("token chain supply changed");
        for (const auto& side : sides_) {
            if (side.chain.state().total_balance() != side.chain.supply()) {
                supply.push_back("side chain " + side.link.side_chain_id.hex() + " supply changed");
            }
        }

        const ScId* id = token_.state().find<ScId>(sc_.contracts.sc_id);
        if (id) {
            std::set<ChainId> seen(id->registry.chain_ids.begin(), id->registry.chain_ids.end());
            if (seen.size() != id->registry.chain_ids.size()) unique.push_back("SC_ID holds a duplicate chain id");
        }

        auto check_votes = [&](const VoteBook& vb, const std::string& where) {
            auto safe = default_threshold(static_cast<std::uint32_t>(vb.voters().size()));
            for (const auto& ex : vb.executions()) {
                if (ex.votes < safe) {
                    quorum.push_back(where + " executed " + ex.subject.hex().substr(0, 10) + " with " +
                                     std::to_string(ex.votes) + " votes (< " + std::to_string(safe) + ")");
                }
            }
        };

        for (const auto& side : sides_) {
            const ScA* a = token_.state().find<ScA>(side.link.sc_a);
            if (!a) continue;
            std::string tag = side.link.side_chain_id.hex().substr(0, 10);
            check_votes(a->votes, "SC_A(" + tag + ")");
            const ChainState& s = side.chain.state();
            const GenesisSpec& g = side.cfg->genesis;
            TokenAmount inbound, outbound;
            if (g.variant == SideVariant::Gasless) {
                TokenAmount total = sc_.token.total_supply;
                TokenAmount bank = s.balance(g.sc_bank);
                TokenAmount reg_bal = s.balance(g.sc_register);
                auto circ = total.checked_sub(bank).value_or(TokenAmount{});
                circ = circ.checked_sub(reg_bal).value_or(TokenAmount{});
                if (circ != a->locked) {
                    peg.push_back(tag + ": SC_A.locked " + amount_str(a->locked) + " != circulating " +
                                  amount_str(circ));
                }
                const ScInter* inter = s.find<ScInter>(g.sc_inter);
                const ScRegister* reg = s.find<ScRegister>(g.sc_register);
                if (inter) {
                    inbound = inter->total_inbound;
                    outbound = inter->total_outbound;
                    check_votes(inter->votes, "SC_Inter(" + tag + ")");
                    // only SC_Inter moves SC_Bank's balance
                    auto expected = g.bal_bank.checked_add(outbound).value_or(TokenAmount{});
                    expected = expected.checked_sub(inbound).value_or(TokenAmount{});
                    if (bank != expected) {
                        access.push_back(tag + ": SC_Bank balance " + amount_str(bank) +
                                         " not explained by SC_Inter traffic (" + amount_str(expected) + ")");
                    }
                }
                if (reg) {
                    check_votes(reg->votes, "SC_Register(" + tag + ")");
                    if ((reg->paid_out || reg->suicided) && !reg_bal.is_zero()) {
                        drained.push_back(tag + ": SC_Register balance " + amount_str(reg_bal) + " after payout");
                    }
                    if (reg->suicided && !reg->paid_out) drained.push_back(tag + ": suicide before payout");
                }
            } else {
                const ScTrading* tr = s.find<ScTrading>(g.sc_trading);
                const ScConsensus* cs = s.find<ScConsensus>(g.sc_register);
                TokenAmount sum = tr ? tr->sum() : TokenAmount{};
                if (sum != a->locked) {
                    peg.push_back(tag + ": sum of SC_Trading " + amount_str(sum) + " != SC_A.locked " +
                                  amount_str(a->locked));
                }
                if (cs) {
                    inbound = cs->total_inbound;
                    outbound = cs->total_outbound;
                    check_votes(cs->votes, "SC_Consensus(" + tag + ")");
                }
            }
            auto compare = [&](TokenAmount sent, TokenAmount arrived, const char* what) {
                if (arrived > sent) {
                    complete.push_back(tag + ": double_unlock on " + what + " (" + amount_str(arrived) + " released for " +
                                       amount_str(sent) + " locked)");
                } else if (arrived < sent) {
                    complete.push_back(tag + ": lost transfer on " + what + " (" + amount_str(arrived) +
                                       " released for " + amount_str(sent) + " locked)");
                }
            };
            compare(a->total_deposited, inbound, "token->side");
            compare(outbound, a->total_unlocked, "side->token");
        }

        for (const auto& w : witnesses_) {
            if (w.config().behavior != Behavior::Honest) continue;
            for (const auto& p : w.pipelines()) {
                std::uint64_t expect = 0;
                for (const auto& r : p.relayed) {
                    if (r.first != expect || r.last < r.first) {
                        windows.push_back("witness " + w.config().token_address.hex().substr(0, 10) + " " +
                                          std::string(to_string(p.dir)) + " window [" + std::to_string(r.first) +
                                          "," + std::to_string(r.last) + "] after " + std::to_string(expect));
                        break;
                    }
                    expect = r.last + 1;
                }
            }
        }

        add("supply_conservation", supply);
        add("peg_conservation", peg);
        add("transfer_completeness", complete);
        add("registry_unique", unique);
        add("register_drained", drained);
        add("quorum_safety", quorum);
        add("bank_access", access);
        add("window_discipline", windows);
        add("vote_binding", binding_violations_);
        return rep;
    }

    void check(bool final)
    {
        InvariantReport rep = evaluate();
        rep.final = final;
        if (final) rep.results.push_back({"quiescence_reached", result_.quiescent,
                                          result_.quiescent ? "" : "max_ticks reached before quiescence"});
        json verdicts = json::object();
        for (const auto& r : rep.results) verdicts[r.name] = r.pass ? json("pass") : json("fail: " + r.detail);
        result_.trace.add(now_, "invariant", "", {{"final", final}, {"results", verdicts}});
        if (!rep.all_pass()) result_.invariants_ok = false;
        result_.checks.push_back(std::move(rep));
    }

    json summary() const
    {
        json sides = json::array();
        for (const auto& side : sides_) {
            const ScA* a = token_.state().find<ScA>(side.link.sc_a);
            const ChainState& s = side.chain.state();
            const GenesisSpec& g = side.cfg->genesis;
            json j{{"chain_id", g.chain_id},
                   {"variant", to_string(g.variant)},
                   {"launched", side.launched},
                   {"height", side.chain.height()},
                   {"registered", a && a->registered},
                   {"sc_a_locked", a ? a->locked : TokenAmount{}},
                   {"reverted_registrations", a ? a->reverted_registrations : 0}};
            if (g.variant == SideVariant::Gasless) {
                TokenAmount bank = s.balance(g.sc_bank), reg = s.balance(g.sc_register);
                j["sc_bank_balance"] = bank;
                j["sc_register_balance"] = reg;
                j["circulating"] = sc_.token.total_supply.checked_sub(bank)
                                       .value_or(TokenAmount{})
                                       .checked_sub(reg)
                                       .value_or(TokenAmount{});
                const ScRegister* r = s.find<ScRegister>(g.sc_register);
                j["sc_register_suicided"] = r && r->suicided;
            } else {
                const ScTrading* tr = s.find<ScTrading>(g.sc_trading);
                j["circulating"] = tr ? tr->sum() : TokenAmount{};
            }
            sides.push_back(j);
        }
        json registry = json::array();
        if (const ScId* id = token_.state().find<ScId>(sc_.contracts.sc_id)) {
            for (const auto& c : id->registry.chain_ids) registry.push_back(c);
        }
        json verdicts = json::object();
        auto failed = result_.failed();
        for (const auto& r : result_.checks.back().results) {
            verdicts[r.name] = failed.contains(r.name) ? "fail" : "pass";
        }
        const auto& st = result_.stats;
        return json{{"seed", sc_.seed},
                    {"mode", to_string(sc_.mode)},
                    {"end_tick", result_.end_tick},
                    {"quiescent", result_.quiescent},
                    {"token_height", token_.height()},
                    {"side_chains", sides},
                    {"registry", registry},
                    {"invariants", verdicts},
                    {"stats",
                     {{"blocks", st.blocks},
                      {"sends", st.sends},
                      {"drops", st.drops},
                      {"dups", st.dups},
                      {"resends", st.resends},
                      {"batches", st.batches},
                      {"subsequent_after_resend", st.subsequent_after_resend},
                      {"reorgs", st.reorgs},
                      {"rejected_txs", st.rejected_txs}}}};
    }

    Scenario sc_;
    RunOptions opts_;
    Rng rng_;
    Chain token_{ChainId{}, ChainKind::TokenChain, ChainState{}, Digest{}};
    std::vector<SideRuntime> sides_;
    std::vector<std::vector<Transaction>> mempools_;
    std::vector<Witness> witnesses_;
    std::vector<std::size_t> witness_side_;
    std::set<Address> honest_addrs_;
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t now_ = 0;
    std::uint64_t in_flight_ = 0;
    std::map<Digest, std::uint32_t> drop_counts_;
    std::vector<bool> fired_triggers_;
    std::vector<std::string> binding_violations_;
    bool dirty_ = true;
    bool resend_seen_ = false;
    RunResult result_;
};

inline RunResult run_scenario(const Scenario& sc, const RunOptions& opts = {})
{
    return Simulator(sc, opts).run();
}

} // namespace bridgesim
