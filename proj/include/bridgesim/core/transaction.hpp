#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bridgesim/core/canonical.hpp"
#include "bridgesim/core/types.hpp"

namespace bridgesim {

// ---------------------------------------------------------------------------
// Transaction payloads
// ---------------------------------------------------------------------------

/// Creator -> SC_A on the token chain. The attached tokens travel in tx.value.
struct RegistrationRequest {
    ChainId chain_id;
    Digest genesis_hash;
    Address creator_side; // payout address on the side chain
};

/// Witness verdict on a pending registration, bound to the request subject.
struct Confirm {
    Digest subject;
    bool verdict = false;
};

enum class ItemKind { RegistrationPayout, Inbound, Outbound, WithdrawConfirm };

struct TransferItem {
    ItemKind kind = ItemKind::Inbound;
    Address from;
    Address to;
    TokenAmount value;
    std::uint64_t request_id = 0;
    // SC_A.locked right after the originating deposit; zero for other kinds.
    TokenAmount locked_after;

    bool operator==(const TransferItem&) const = default;
};

/// Relayed batch of cross-chain items for one target contract, taken from one
/// confirmed window of the source chain.
struct Transferring {
    ChainId source_chain;
    std::uint64_t window_first = 0;
    std::uint64_t window_last = 0;
    Address target;
    std::vector<TransferItem> items;
    Digest subject;
};

/// Plain value transfer. A destination makes it a cross-chain lock when sent
/// to SC_A (token chain) or SC_Inter (side chain).
struct UserTransfer {
    std::optional<Address> destination;
};

struct IoTRecord {
    std::string data;
};

struct MultisigAction {
    std::string action;
};

struct TradingAction {
    enum class Op { Transfer, Withdraw };
    Op op = Op::Transfer;
    Address to; // ledger recipient, or token-chain destination for Withdraw
    TokenAmount value;
};

using Payload = std::variant<RegistrationRequest, Confirm, Transferring, UserTransfer, IoTRecord, MultisigAction,
                             TradingAction>;

enum class PayloadKind { RegistrationRequest, Confirm, Transferring, UserTransfer, IoTRecord, MultisigAction, TradingAction };

inline PayloadKind payload_kind(const Payload& p) { return static_cast<PayloadKind>(p.index()); }

inline std::string_view to_string(PayloadKind k)
{
    switch (k) {
    case PayloadKind::RegistrationRequest: return "RegistrationRequest";
    case PayloadKind::Confirm: return "Confirm";
    case PayloadKind::Transferring: return "Transferring";
    case PayloadKind::UserTransfer: return "UserTransfer";
    case PayloadKind::IoTRecord: return "IoTRecord";
    case PayloadKind::MultisigAction: return "MultisigAction";
    case PayloadKind::TradingAction: return "TradingAction";
    }
    return "?";
}

inline std::optional<PayloadKind> payload_kind_from_string(std::string_view s)
{
    for (int i = 0; i <= static_cast<int>(PayloadKind::TradingAction); ++i) {
        auto k = static_cast<PayloadKind>(i);
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

/// Payloads that feed a quorum tally must carry a round.
inline bool payload_requires_round(const Payload& p)
{
    return std::holds_alternative<Confirm>(p) || std::holds_alternative<Transferring>(p);
}

struct Transaction {
    Address from;
    Address to;
    TokenAmount value;
    std::uint64_t gasprice = 0;
    std::optional<std::uint64_t> round;
    Payload payload = UserTransfer{};
};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

enum class Topic { ExistOrNot, CrossChainArrived, AssetsLocked, RegistrationResult, ConsensusResult };

inline std::string_view to_string(Topic t)
{
    switch (t) {
    case Topic::ExistOrNot: return "ExistOrNot";
    case Topic::CrossChainArrived: return "CrossChainArrived";
    case Topic::AssetsLocked: return "AssetsLocked";
    case Topic::RegistrationResult: return "RegistrationResult";
    case Topic::ConsensusResult: return "ConsensusResult";
    }
    return "?";
}

struct ExistOrNotData {
    ChainId chain_id;
    bool appended = false;
    Address sc_a; // the bridge head whose quorum triggered the update
    Address creator_side;
    TokenAmount amount;
    std::uint64_t request_id = 0;
};

enum class ArrivalKind { Registration, Deposit, WithdrawRequest };

struct ArrivalData {
    ArrivalKind kind = ArrivalKind::Deposit;
    ChainId chain_id;
    std::uint64_t request_id = 0;
    Address from;
    Address to;
    TokenAmount value;
    TokenAmount locked_after;
    Digest genesis_hash; // registration only
    Digest subject;      // registration only: what Confirm votes bind to
};

struct AssetsLockedData {
    ChainId chain_id;
    std::uint64_t request_id = 0;
    Address from;
    Address to;
    TokenAmount value;
};

struct RegistrationResultData {
    ChainId chain_id;
    Digest subject;
    bool success = false;
    std::uint64_t round = 0; // round in force after this result
    TokenAmount refund;
};

struct ConsensusResultData {
    Digest subject;
    std::string status;
    std::uint64_t round = 0;
    std::vector<std::string> item_results;
};

using EventData =
    std::variant<ExistOrNotData, ArrivalData, AssetsLockedData, RegistrationResultData, ConsensusResultData>;

struct Origin {
    std::uint64_t height = 0;
    std::uint64_t tx_index = 0; // == transaction count for end-of-block processing
};

struct Event {
    Address contract;
    EventData data;
    Origin origin;

    Topic topic() const { return static_cast<Topic>(data.index()); }
};

/// Subject a Confirm/Transferring vote is tallied under, for result lookup.
inline std::optional<Digest> result_subject(const Event& e)
{
    if (auto r = std::get_if<RegistrationResultData>(&e.data)) return r->subject;
    if (auto r = std::get_if<ConsensusResultData>(&e.data)) return r->subject;
    return std::nullopt;
}

inline std::optional<std::uint64_t> result_round(const Event& e)
{
    if (auto r = std::get_if<RegistrationResultData>(&e.data)) return r->round;
    if (auto r = std::get_if<ConsensusResultData>(&e.data)) return r->round;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline std::string_view to_string(ItemKind k)
{
    switch (k) {
    case ItemKind::RegistrationPayout: return "registration_payout";
    case ItemKind::Inbound: return "inbound";
    case ItemKind::Outbound: return "outbound";
    case ItemKind::WithdrawConfirm: return "withdraw_confirm";
    }
    return "?";
}

inline ItemKind item_kind_from_string(std::string_view s)
{
    for (auto k : {ItemKind::RegistrationPayout, ItemKind::Inbound, ItemKind::Outbound, ItemKind::WithdrawConfirm}) {
        if (to_string(k) == s) return k;
    }
    throw ParseError("unknown transfer item kind '" + std::string(s) + "'");
}

inline std::string_view to_string(ArrivalKind k)
{
    switch (k) {
    case ArrivalKind::Registration: return "registration";
    case ArrivalKind::Deposit: return "deposit";
    case ArrivalKind::WithdrawRequest: return "withdraw_request";
    }
    return "?";
}

inline void to_json(json& j, const TransferItem& i)
{
    j = json{{"kind", to_string(i.kind)}, {"from", i.from},         {"to", i.to},
             {"value", i.value},          {"request_id", i.request_id}, {"locked_after", i.locked_after}};
}

inline void from_json(const json& j, TransferItem& i)
{
    i.kind = item_kind_from_string(j.at("kind").get<std::string>());
    i.from = j.at("from").get<Address>();
    i.to = j.at("to").get<Address>();
    i.value = j.at("value").get<TokenAmount>();
    i.request_id = j.at("request_id").get<std::uint64_t>();
    i.locked_after = j.at("locked_after").get<TokenAmount>();
}

/// Digest honest witnesses agree on for a batch; contracts recompute it.
inline Digest transferring_subject(const Transferring& t)
{
    return canonical_digest(json{{"source_chain", t.source_chain},
                                 {"window", {t.window_first, t.window_last}},
                                 {"target", t.target},
                                 {"items", t.items}});
}

inline json payload_to_json(const Payload& p)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            json j;
            if constexpr (std::is_same_v<T, RegistrationRequest>) {
                j = {{"chain_id", v.chain_id}, {"genesis_hash", v.genesis_hash}, {"creator_side", v.creator_side}};
            } else if constexpr (std::is_same_v<T, Confirm>) {
                j = {{"subject", v.subject}, {"verdict", v.verdict}};
            } else if constexpr (std::is_same_v<T, Transferring>) {
                j = {{"source_chain", v.source_chain}, {"window", {v.window_first, v.window_last}},
                     {"target", v.target},             {"items", v.items},
                     {"subject", v.subject}};
            } else if constexpr (std::is_same_v<T, UserTransfer>) {
                j = json::object();
                if (v.destination) j["destination"] = *v.destination;
            } else if constexpr (std::is_same_v<T, IoTRecord>) {
                j = {{"data", v.data}};
            } else if constexpr (std::is_same_v<T, MultisigAction>) {
                j = {{"action", v.action}};
            } else if constexpr (std::is_same_v<T, TradingAction>) {
                j = {{"op", v.op == TradingAction::Op::Transfer ? "transfer" : "withdraw"},
                     {"to", v.to},
                     {"value", v.value}};
            }
            return j;
        },
        p);
}

inline json to_json_value(const Transaction& tx)
{
    json j{{"from", tx.from},
           {"to", tx.to},
           {"value", tx.value},
           {"gasprice", tx.gasprice},
           {"kind", to_string(payload_kind(tx.payload))},
           {"payload", payload_to_json(tx.payload)}};
    if (tx.round) j["round"] = *tx.round;
    return j;
}

inline Digest transaction_digest(const Transaction& tx) { return canonical_digest(to_json_value(tx)); }

inline json event_data_to_json(const EventData& d)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ExistOrNotData>) {
                return {{"chain_id", v.chain_id},         {"appended", v.appended}, {"sc_a", v.sc_a},
                        {"creator_side", v.creator_side}, {"amount", v.amount},     {"request_id", v.request_id}};
            } else if constexpr (std::is_same_v<T, ArrivalData>) {
                return {{"kind", to_string(v.kind)},
                        {"chain_id", v.chain_id},
                        {"request_id", v.request_id},
                        {"from", v.from},
                        {"to", v.to},
                        {"value", v.value},
                        {"locked_after", v.locked_after},
                        {"genesis_hash", v.genesis_hash},
                        {"subject", v.subject}};
            } else if constexpr (std::is_same_v<T, AssetsLockedData>) {
                return {{"chain_id", v.chain_id}, {"request_id", v.request_id}, {"from", v.from},
                        {"to", v.to},             {"value", v.value}};
            } else if constexpr (std::is_same_v<T, RegistrationResultData>) {
                return {{"chain_id", v.chain_id}, {"subject", v.subject}, {"success", v.success},
                        {"round", v.round},       {"refund", v.refund}};
            } else {
                return {{"subject", v.subject},
                        {"status", v.status},
                        {"round", v.round},
                        {"item_results", v.item_results}};
            }
        },
        d);
}

inline json to_json_value(const Event& e)
{
    return json{{"contract", e.contract},
                {"topic", to_string(e.topic())},
                {"data", event_data_to_json(e.data)},
                {"origin", {e.origin.height, e.origin.tx_index}}};
}

} // namespace bridgesim
