#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bridgesim/core/chain.hpp"
#include "bridgesim/witness/cursor.hpp"
#include "bridgesim/witness/validation.hpp"

namespace bridgesim {

enum class Behavior { Honest, Crashed, RejectAll, ApproveAll, Equivocating };

inline std::string_view to_string(Behavior b)
{
    switch (b) {
    case Behavior::Honest: return "honest";
    case Behavior::Crashed: return "crashed";
    case Behavior::RejectAll: return "reject_all";
    case Behavior::ApproveAll: return "approve_all";
    case Behavior::Equivocating: return "equivocating";
    }
    return "?";
}

inline std::optional<Behavior> behavior_from_string(std::string_view s)
{
    for (auto b : {Behavior::Honest, Behavior::Crashed, Behavior::RejectAll, Behavior::ApproveAll,
                   Behavior::Equivocating}) {
        if (to_string(b) == s) return b;
    }
    return std::nullopt;
}

struct WitnessConfig {
    ChainId chain_id; // the side chain this witness serves
    Address token_address;
    Address side_address;
    Behavior behavior = Behavior::Honest;
};

/// Static facts about one token-chain/side-chain pair, shared by its witnesses.
struct BridgeLink {
    ChainId token_chain_id;
    ChainId side_chain_id;
    SideVariant variant = SideVariant::Gasless;
    Address sc_a;
    Address sc_id;
    GenesisSpec genesis;
    std::uint64_t token_omega = 3;
    std::uint64_t side_omega = 2;

    /// Where side-bound deposits and the registration payout go.
    Address inbound_target() const { return variant == SideVariant::Gasless ? genesis.sc_inter : genesis.sc_register; }
    Address payout_target() const { return genesis.sc_register; }
    /// Side-chain contract whose AssetsLocked events feed SC_A.
    Address lock_source() const { return variant == SideVariant::Gasless ? genesis.sc_bank : genesis.sc_register; }
};

enum class Direction { TokenToSide, SideToToken };

inline std::string_view to_string(Direction d) { return d == Direction::TokenToSide ? "token_to_side" : "side_to_token"; }

/// Read-only access a witness has when it wakes.
struct WitnessView {
    const Chain& token;
    const Chain& side;
    std::function<std::optional<std::string>(const ChainId&)> fetch_genesis;

    const Chain& chain(bool token_chain) const { return token_chain ? token : side; }
};

struct Submission {
    bool to_token_chain = true;
    Address target;
    Digest subject;
    Transaction tx; // round is filled in at send time
    bool awaited = true;
    bool done = false;
};

struct PendingWindow {
    HeightRange window;
    std::vector<Submission> subs;
    std::uint64_t sent_tick = 0;
    std::optional<std::uint64_t> resend_at;
    std::uint32_t attempt = 0;
};

struct Pipeline {
    Direction dir = Direction::TokenToSide;
    RelayCursor cursor = RelayCursor::from_genesis(0);
    std::optional<PendingWindow> pending;
    std::vector<HeightRange> relayed;
    std::optional<std::uint64_t> wait_logged; // h_l of the last logged window wait
};

struct Outgoing {
    bool to_token_chain = true;
    Transaction tx;
};

/// Something worth a trace record; `token_chain` says which chain it concerns.
struct WitnessNote {
    std::string kind;
    bool token_chain = true;
    json payload;
};

struct WakeResult {
    std::vector<Outgoing> sends;
    std::vector<WitnessNote> notes;
};

/// Contracts a pipeline scans on its source chain.
inline std::vector<Address> watched_contracts(const BridgeLink& link, Direction d)
{
    if (d == Direction::TokenToSide) return {link.sc_a, link.sc_id};
    return {link.lock_source()};
}

/// Whether `e` on the pipeline's source chain calls for a relay.
inline bool is_relevant(const BridgeLink& link, Direction d, const Event& e)
{
    if (d == Direction::TokenToSide) {
        if (e.contract == link.sc_a) {
            auto a = std::get_if<ArrivalData>(&e.data);
            return a && (a->kind == ArrivalKind::Registration || a->kind == ArrivalKind::Deposit);
        }
        if (e.contract == link.sc_id) {
            auto x = std::get_if<ExistOrNotData>(&e.data);
            return x && x->appended && x->sc_a == link.sc_a;
        }
        return false;
    }
    if (e.contract != link.lock_source()) return false;
    if (std::holds_alternative<AssetsLockedData>(e.data)) return true;
    auto a = std::get_if<ArrivalData>(&e.data);
    return a && a->kind == ArrivalKind::WithdrawRequest;
}

/// Height of the newest relevant event on the pipeline's source chain.
inline std::optional<std::uint64_t> last_relevant_height(const Chain& source, const BridgeLink& link, Direction d)
{
    for (std::uint64_t h = source.height() + 1; h-- > 0;) {
        for (const auto& e : source.block(h).events) {
            if (is_relevant(link, d, e)) return h;
        }
    }
    return std::nullopt;
}

namespace detail {

inline Transaction vote_tx(const Address& from, const Address& to, Payload p)
{
    Transaction tx;
    tx.from = from;
    tx.to = to;
    tx.payload = std::move(p);
    return tx;
}

/// Registration verdict an honest witness would give, or nullopt to abstain.
inline std::optional<bool> honest_verdict(const BridgeLink& link, const WitnessView& view, const ArrivalData& a)
{
    const auto* id = view.token.state().find<ScId>(link.sc_id);
    RegistryState empty;
    const RegistryState& registry = id ? id->registry : empty;
    RegistrationClaim claim{a.chain_id, a.value, a.genesis_hash};
    if (link.variant == SideVariant::NativeGas) {
        return validate_registration_nativegas(claim, link.genesis.chain_id, registry, link.token_chain_id);
    }
    auto file = view.fetch_genesis ? view.fetch_genesis(a.chain_id) : std::nullopt;
    if (!file) return std::nullopt;
    return validate_registration(*file, view.side.height(), claim, registry, link.token_chain_id);
}

/// Deterministic corruption an equivocating witness relays next to the honest
/// batch. Colluders derive it from the same subject, so their votes pool.
inline std::optional<Transferring> corrupt(const Transferring& t)
{
    if (t.items.empty()) return std::nullopt;
    Transferring c = t;
    if (t.subject.bytes[0] % 2 == 0 || t.items.front().value.is_zero()) {
        c.items.insert(c.items.end(), t.items.begin(), t.items.end());
    } else {
        c.items.front().value = add_or_throw(c.items.front().value, c.items.front().value);
    }
    c.subject = transferring_subject(c);
    return c;
}

} // namespace detail

/// Honest relay of one window: one Confirm per registration request and one
/// Transferring per target contract.
struct BatchPlan {
    struct Vote {
        Address target;
        ArrivalData request;
    };
    std::vector<Vote> confirms;
    std::vector<std::pair<bool, Transferring>> transfers; // (to token chain, batch)
};

inline BatchPlan plan_batch(const BridgeLink& link, Direction d, HeightRange window, const std::vector<Event>& events)
{
    BatchPlan plan;
    std::map<Address, std::vector<TransferItem>> items;
    std::vector<Address> order;
    auto add = [&](const Address& target, TransferItem item) {
        if (!items.contains(target)) order.push_back(target);
        items[target].push_back(item);
    };
    for (const auto& e : events) {
        if (!is_relevant(link, d, e)) continue;
        if (auto a = std::get_if<ArrivalData>(&e.data)) {
            if (a->kind == ArrivalKind::Registration) {
                plan.confirms.push_back({e.contract, *a});
            } else if (a->kind == ArrivalKind::Deposit) {
                add(link.inbound_target(), {ItemKind::Inbound, a->from, a->to, a->value, a->request_id, a->locked_after});
            } else {
                add(link.lock_source(), {ItemKind::WithdrawConfirm, a->from, a->to, a->value, a->request_id, {}});
            }
        } else if (auto x = std::get_if<ExistOrNotData>(&e.data)) {
            TokenAmount v = link.variant == SideVariant::Gasless ? link.genesis.bal_resv : x->amount;
            add(link.payout_target(), {ItemKind::RegistrationPayout, x->sc_a, x->creator_side, v, x->request_id, {}});
        } else if (auto l = std::get_if<AssetsLockedData>(&e.data)) {
            add(link.sc_a, {ItemKind::Outbound, l->from, l->to, l->value, l->request_id, {}});
        }
    }
    ChainId source = d == Direction::TokenToSide ? link.token_chain_id : link.side_chain_id;
    for (const auto& target : order) {
        Transferring t{source, window.first, window.last, target, items[target], {}};
        t.subject = transferring_subject(t);
        plan.transfers.emplace_back(target == link.sc_a, std::move(t));
    }
    return plan;
}

/// Transactions a witness with behavior `b` submits for one planned window.
inline std::vector<Submission> relay_and_vote(const WitnessConfig& w, const BridgeLink& link, const BatchPlan& plan,
                                              const WitnessView& view)
{
    std::vector<Submission> out;
    if (w.behavior == Behavior::Crashed) return out;
    for (const auto& c : plan.confirms) {
        std::optional<bool> verdict;
        switch (w.behavior) {
        case Behavior::RejectAll: verdict = false; break;
        case Behavior::ApproveAll: verdict = true; break;
        default: verdict = detail::honest_verdict(link, view, c.request); break;
        }
        if (!verdict) continue;
        out.push_back({true, c.target, c.request.subject,
                       detail::vote_tx(w.token_address, c.target, Confirm{c.request.subject, *verdict}), true, false});
        if (w.behavior == Behavior::Equivocating) {
            Digest other = sha256(c.request.subject.hex());
            out.push_back({true, c.target, other, detail::vote_tx(w.token_address, c.target, Confirm{other, true}),
                           false, false});
        }
    }
    if (w.behavior == Behavior::RejectAll) return out;
    for (const auto& [to_token, t] : plan.transfers) {
        const Address& from = to_token ? w.token_address : w.side_address;
        out.push_back({to_token, t.target, t.subject, detail::vote_tx(from, t.target, t), true, false});
        if (w.behavior == Behavior::Equivocating) {
            if (auto c = detail::corrupt(t)) {
                out.push_back({to_token, c->target, c->subject, detail::vote_tx(from, c->target, *c), false, false});
            }
        }
    }
    return out;
}

/// One witness: a token->side and a side->token pipeline, each running the
/// collect / relay / await-result / resend loop.
class Witness {
public:
    Witness(WitnessConfig config, BridgeLink link, std::uint64_t timeout_t, std::uint64_t sleep_T)
        : config_(std::move(config)), link_(std::move(link)), timeout_(timeout_t), sleep_(sleep_T)
    {
        pipelines_.push_back({Direction::TokenToSide, RelayCursor::from_genesis(link_.token_omega), {}, {}, {}});
        pipelines_.push_back({Direction::SideToToken, RelayCursor::from_genesis(link_.side_omega), {}, {}, {}});
    }

    const WitnessConfig& config() const { return config_; }
    const BridgeLink& link() const { return link_; }
    const std::vector<Pipeline>& pipelines() const { return pipelines_; }
    void set_behavior(Behavior b) { config_.behavior = b; }

    WakeResult wake(std::uint64_t now, const WitnessView& view)
    {
        WakeResult r;
        if (config_.behavior == Behavior::Crashed) return r;
        for (auto& p : pipelines_) step(p, now, view, r);
        return r;
    }

    /// No outstanding window and nothing relevant left unread at or below
    /// `last_relevant` (per pipeline, indexed like pipelines()).
    bool caught_up(const std::vector<std::optional<std::uint64_t>>& last_relevant) const
    {
        for (std::size_t i = 0; i < pipelines_.size(); ++i) {
            const auto& p = pipelines_[i];
            if (p.pending) return false;
            if (last_relevant[i] && p.cursor.next_window().first <= *last_relevant[i]) return false;
        }
        return true;
    }

private:
    bool source_is_token(const Pipeline& p) const { return p.dir == Direction::TokenToSide; }

    std::uint64_t target_omega(bool token_chain) const { return token_chain ? link_.token_omega : link_.side_omega; }

    void send(Submission& s, const WitnessView& view, WakeResult& r) const
    {
        const Chain& target = view.chain(s.to_token_chain);
        auto latest = target.latest_round(s.target);
        s.tx.round = latest ? latest->second : 0;
        r.sends.push_back({s.to_token_chain, s.tx});
    }

    bool settled(const Submission& s, const WitnessView& view) const
    {
        const Chain& target = view.chain(s.to_token_chain);
        auto h = target.result_height(s.target, s.subject);
        return h && target.depth_of(*h) >= target_omega(s.to_token_chain);
    }

    void step(Pipeline& p, std::uint64_t now, const WitnessView& view, WakeResult& r)
    {
        const Chain& source = view.chain(source_is_token(p));
        // Bounded: each iteration either returns or consumes one window.
        for (;;) {
            if (p.pending) {
                auto& pw = *p.pending;
                bool all = true;
                for (auto& s : pw.subs) {
                    if (s.awaited && !s.done) s.done = settled(s, view);
                    all = all && (!s.awaited || s.done);
                }
                if (!all) {
                    if (pw.resend_at && now >= *pw.resend_at) {
                        ++pw.attempt;
                        pw.sent_tick = now;
                        pw.resend_at.reset();
                        json subjects = json::array();
                        for (auto& s : pw.subs) {
                            if (s.awaited && !s.done) {
                                send(s, view, r);
                                subjects.push_back(s.subject);
                            }
                        }
                        r.notes.push_back({"resend", source_is_token(p),
                                           {{"witness", config_.token_address},
                                            {"pipeline", to_string(p.dir)},
                                            {"window", {pw.window.first, pw.window.last}},
                                            {"attempt", pw.attempt},
                                            {"subjects", subjects}}});
                    } else if (!pw.resend_at && now >= pw.sent_tick + timeout_) {
                        pw.resend_at = now + sleep_;
                    }
                    return;
                }
                p.relayed.push_back(pw.window);
                p.pending.reset();
                p.cursor.advance();
            }

            std::uint64_t head = source.height();
            if (!p.cursor.ready(head)) {
                if (p.wait_logged != p.cursor.h_l()) {
                    p.wait_logged = p.cursor.h_l();
                    r.notes.push_back({"window_wait", source_is_token(p),
                                       {{"witness", config_.token_address},
                                        {"pipeline", to_string(p.dir)},
                                        {"h_l", p.cursor.h_l()},
                                        {"h_l2", head},
                                        {"needed", p.cursor.h_l() + p.cursor.omega()}}});
                }
                return;
            }

            HeightRange window = p.cursor.next_window();
            auto events = collect_events(source, window, watched_contracts(link_, p.dir));
            BatchPlan plan = plan_batch(link_, p.dir, window, events);
            PendingWindow pw;
            pw.window = window;
            pw.sent_tick = now;
            pw.subs = relay_and_vote(config_, link_, plan, view);
            if (!pw.subs.empty()) {
                json subjects = json::array();
                for (auto& s : pw.subs) {
                    send(s, view, r);
                    subjects.push_back(s.subject);
                }
                r.notes.push_back({"batch", source_is_token(p),
                                   {{"witness", config_.token_address},
                                    {"pipeline", to_string(p.dir)},
                                    {"window", {window.first, window.last}},
                                    {"h_l", p.cursor.h_l()},
                                    {"h_l2", head},
                                    {"gate", p.cursor.first() ? "first" : "subsequent"},
                                    {"subjects", subjects}}});
            }
            p.pending = std::move(pw);
        }
    }

    WitnessConfig config_;
    BridgeLink link_;
    std::uint64_t timeout_;
    std::uint64_t sleep_;
    std::vector<Pipeline> pipelines_;
};

} // namespace bridgesim
