#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bridgesim/contracts/quorum.hpp"
#include "bridgesim/contracts/state.hpp"
#include "bridgesim/core/genesis.hpp"
#include "bridgesim/witness/witness.hpp"

namespace bridgesim {

// Scenario files may name addresses either as 0x-hex or as "@label"; a label
// stands for address_from_label(label). Genesis files on disk must use hex.

struct TokenChainConfig {
    ChainId chain_id;
    TokenAmount total_supply;
    std::uint64_t block_interval = 3;
    std::uint64_t omega = 3;
    std::map<Address, TokenAmount> accounts;
};

struct SideChainConfig {
    GenesisSpec genesis;
    std::string genesis_text; // canonical file content the witnesses fetch
    std::uint64_t block_interval = 1;
    std::uint64_t omega = 2;
    Address sc_a;
    std::vector<Address> owners;
    std::uint32_t multisig_required = 2;
    std::optional<std::uint32_t> threshold;
    std::vector<Address> accounts;
    std::uint64_t initial_height = 0;
    bool publish_genesis = true;
    bool bank_per_transfer_approval = false;
};

struct ContractsConfig {
    Address sc_id;
    std::vector<Address> sc_id_owners;
    std::uint32_t sc_id_required = 2;
    TokenAmount compensation_fee;
    TokenAmount entrance_fee_minimum;
    std::uint64_t timeout_t = 50;
    std::uint64_t resend_sleep_T = 10;
    std::optional<std::uint64_t> registration_timeout; // SC_A deadline; defaults to timeout_t

    std::uint64_t registration_deadline() const { return registration_timeout.value_or(timeout_t); }
};

struct ReorgPlan {
    std::optional<std::uint64_t> tick;
    std::string trigger; // "first_unlock", "first_inbound" or empty
    ChainId chain;
    std::uint64_t depth = 0;
    std::vector<PayloadKind> exclude;
};

struct FaultPlan {
    double drop_rate = 0;
    double dup_rate = 0;
    std::uint64_t max_delay = 1;
    std::uint32_t max_drops_per_message = 3;
    std::vector<ReorgPlan> reorgs;
    std::map<Address, Behavior> witness_behaviors; // keyed by token-chain address
};

enum class WorkAction { Register, Deposit, Withdraw, Trade, IotRecord, Transfer };

inline std::string_view to_string(WorkAction a)
{
    switch (a) {
    case WorkAction::Register: return "register";
    case WorkAction::Deposit: return "deposit";
    case WorkAction::Withdraw: return "withdraw";
    case WorkAction::Trade: return "trade";
    case WorkAction::IotRecord: return "iot_record";
    case WorkAction::Transfer: return "transfer";
    }
    return "?";
}

struct WorkItem {
    std::uint64_t tick = 0;
    WorkAction action = WorkAction::Transfer;
    ChainId chain_id; // side chain concerned (unused for plain token transfers)
    Address from;
    Address to;
    TokenAmount value;
    std::optional<Digest> genesis_hash; // register: overrides the published hash
    std::string data;
};

struct Scenario {
    std::uint64_t seed = 1;
    std::uint64_t max_ticks = 2000;
    GateMode mode = GateMode::Conservation;
    TokenChainConfig token;
    std::vector<SideChainConfig> sides;
    std::vector<WitnessConfig> witnesses;
    ContractsConfig contracts;
    FaultPlan faults;
    std::vector<WorkItem> workload;
    json source; // the scenario as given, with labels resolved

    const SideChainConfig* side(const ChainId& id) const
    {
        for (const auto& s : sides) {
            if (s.genesis.chain_id == id) return &s;
        }
        return nullptr;
    }

    /// Witnesses of the side chain `id`, in declaration order.
    std::vector<WitnessConfig> witnesses_of(const ChainId& id) const
    {
        std::vector<WitnessConfig> out;
        for (const auto& w : witnesses) {
            if (w.chain_id == id) out.push_back(w);
        }
        return out;
    }

    std::uint32_t threshold_of(const SideChainConfig& s) const
    {
        return s.threshold.value_or(default_threshold(static_cast<std::uint32_t>(s.genesis.witnesses.size())));
    }
};

/// Scenario rejected by static validation.
class ScenarioInvalid : public std::runtime_error {
public:
    explicit ScenarioInvalid(Diagnostics d) : std::runtime_error(summary(d)), diagnostics(std::move(d)) {}
    Diagnostics diagnostics;

private:
    static std::string summary(const Diagnostics& d)
    {
        std::string s = "scenario invalid";
        for (const auto& x : d) s += "\n  " + format(x);
        return s;
    }
};

namespace detail {

inline bool is_label(const json& j) { return j.is_string() && !j.get<std::string>().empty() && j.get<std::string>()[0] == '@'; }

/// Replaces "@label" strings anywhere in the document (keys included).
inline json resolve_labels(const json& j)
{
    if (is_label(j)) return address_from_label(j.get<std::string>().substr(1)).hex();
    if (j.is_array()) {
        json out = json::array();
        for (const auto& x : j) out.push_back(resolve_labels(x));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : j.items()) {
            std::string key = !k.empty() && k[0] == '@' ? address_from_label(k.substr(1)).hex() : k;
            out[key] = resolve_labels(v);
        }
        return out;
    }
    return j;
}

/// Field reader that records a diagnostic instead of throwing.
class Reader {
public:
    Reader(const json& j, std::string path, Diagnostics& d) : j_(j), path_(std::move(path)), d_(d)
    {
        if (!j_.is_object()) d_.push_back({path_, "type", "expected an object"});
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
    std::string path(const std::string& key) const { return path_ + "." + key; }
    const json& at(const char* key) const { return j_.at(key); }

    template <class T>
    T get(const char* key, T fallback, bool required = false) const
    {
        if (!has(key)) {
            if (required) d_.push_back({path(key), "required-field", "missing required field"});
            return fallback;
        }
        try {
            return j_.at(key).get<T>();
        } catch (const std::exception& e) {
            d_.push_back({path(key), "type", e.what()});
            return fallback;
        }
    }

    void only(std::initializer_list<const char*> known) const
    {
        if (!j_.is_object()) return;
        for (const auto& [k, _] : j_.items()) {
            bool ok = false;
            for (auto n : known) ok = ok || k == n;
            if (!ok) d_.push_back({path(k), "unknown-field", "field not recognized"});
        }
    }

private:
    const json& j_;
    std::string path_;
    Diagnostics& d_;
};

inline std::optional<std::string> read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::optional<WorkAction> work_action_from_string(std::string_view s)
{
    for (auto a : {WorkAction::Register, WorkAction::Deposit, WorkAction::Withdraw, WorkAction::Trade,
                   WorkAction::IotRecord, WorkAction::Transfer}) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

inline void check_probability(double p, const std::string& field, Diagnostics& d)
{
    if (!(p >= 0.0 && p <= 1.0)) d.push_back({field, "probability", "must lie in [0, 1]"});
}

} // namespace detail

struct ParseOptions {
    std::filesystem::path base_dir = ".";
    std::optional<std::uint32_t> threshold_override; // unsafe values allowed
};

/// Decodes and statically validates a scenario. Every violated rule is
/// reported; the scenario is returned only when there are none.
inline Scenario parse_scenario(const json& raw, const ParseOptions& opts, Diagnostics& diags)
{
    Scenario sc;
    json j = detail::resolve_labels(raw);
    sc.source = j;
    detail::Reader top(j, "scenario", diags);
    top.only({"seed", "max_ticks", "mode", "token_chain", "side_chains", "witnesses", "contracts", "fault_plan",
              "workload"});
    sc.seed = top.get<std::uint64_t>("seed", 1);
    sc.max_ticks = top.get<std::uint64_t>("max_ticks", 2000);
    std::string mode = top.get<std::string>("mode", "conservation");
    if (mode == "conservation") sc.mode = GateMode::Conservation;
    else if (mode == "strict") sc.mode = GateMode::Strict;
    else diags.push_back({"scenario.mode", "enum", "expected 'conservation' or 'strict'"});
    if (!j.is_object()) return sc;

    // token chain
    if (!j.contains("token_chain")) diags.push_back({"scenario.token_chain", "required-field", "missing"});
    json tj = j.value("token_chain", json::object());
    detail::Reader t(tj, "scenario.token_chain", diags);
    t.only({"chain_id", "total_supply", "block_interval", "omega", "accounts"});
    sc.token.chain_id = t.get<Address>("chain_id", {}, true);
    sc.token.total_supply = t.get<TokenAmount>("total_supply", {}, true);
    sc.token.block_interval = t.get<std::uint64_t>("block_interval", 3);
    sc.token.omega = t.get<std::uint64_t>("omega", 3);
    if (sc.token.block_interval == 0) diags.push_back({t.path("block_interval"), "positive", "must be at least 1"});
    if (t.has("accounts")) {
        const auto& acc = tj.at("accounts");
        if (!acc.is_object()) {
            diags.push_back({t.path("accounts"), "type", "expected an object address -> amount"});
        } else {
            TokenAmount sum;
            for (const auto& [k, v] : acc.items()) {
                try {
                    Address a = Address::from_hex(k);
                    TokenAmount amt = v.get<TokenAmount>();
                    sc.token.accounts[a] = amt;
                    auto s2 = sum.checked_add(amt);
                    if (!s2) throw ParseError("sum overflows");
                    sum = *s2;
                } catch (const std::exception& e) {
                    diags.push_back({t.path("accounts") + "." + k, "account", e.what()});
                }
            }
            if (sum > sc.token.total_supply) {
                diags.push_back({t.path("accounts"), "supply-bound", "account balances exceed total_supply"});
            }
        }
    }

    // contracts
    json cj = j.value("contracts", json::object());
    detail::Reader c(cj, "scenario.contracts", diags);
    c.only({"sc_id", "sc_id_owners", "sc_id_required", "compensation_fee", "entrance_fee_minimum", "timeout_t",
            "resend_sleep_T", "registration_timeout"});
    sc.contracts.sc_id = c.get<Address>("sc_id", {}, true);
    sc.contracts.sc_id_owners = c.get<std::vector<Address>>("sc_id_owners", {}, true);
    sc.contracts.sc_id_required = c.get<std::uint32_t>("sc_id_required", 2);
    sc.contracts.compensation_fee = c.get<TokenAmount>("compensation_fee", {});
    sc.contracts.entrance_fee_minimum = c.get<TokenAmount>("entrance_fee_minimum", {});
    sc.contracts.timeout_t = c.get<std::uint64_t>("timeout_t", 50);
    sc.contracts.resend_sleep_T = c.get<std::uint64_t>("resend_sleep_T", 10);
    if (sc.contracts.sc_id_required == 0 || sc.contracts.sc_id_required > sc.contracts.sc_id_owners.size()) {
        diags.push_back({c.path("sc_id_required"), "multisig", "need 1 <= required <= number of owners"});
    }
    if (c.has("registration_timeout")) {
        sc.contracts.registration_timeout = c.get<std::uint64_t>("registration_timeout", 1);
        if (*sc.contracts.registration_timeout == 0) {
            diags.push_back({c.path("registration_timeout"), "positive", "must be at least 1"});
        }
    }
    if (sc.contracts.timeout_t == 0) diags.push_back({c.path("timeout_t"), "positive", "must be at least 1"});

    // side chains
    std::set<ChainId> chain_ids{sc.token.chain_id};
    std::set<Address> token_contracts{sc.contracts.sc_id};
    json sides = j.value("side_chains", json::array());
    if (!sides.is_array() || sides.empty()) {
        diags.push_back({"scenario.side_chains", "non-empty", "at least one side chain required"});
        sides = json::array();
    }
    for (std::size_t i = 0; i < sides.size(); ++i) {
        std::string path = "scenario.side_chains[" + std::to_string(i) + "]";
        detail::Reader s(sides[i], path, diags);
        s.only({"variant", "genesis", "block_interval", "omega", "sc_a", "owners", "multisig_required", "threshold",
                "accounts", "initial_height", "publish_genesis", "bank_per_transfer_approval"});
        SideChainConfig side;
        std::string variant = s.get<std::string>("variant", "gasless");
        SideVariant v = SideVariant::Gasless;
        if (variant == "native_gas") v = SideVariant::NativeGas;
        else if (variant != "gasless") diags.push_back({s.path("variant"), "enum", "expected 'gasless' or 'native_gas'"});

        json gj;
        if (!s.has("genesis")) {
            diags.push_back({s.path("genesis"), "required-field", "missing"});
        } else if (s.at("genesis").is_string()) {
            auto file = opts.base_dir / s.at("genesis").get<std::string>();
            auto text = detail::read_file(file);
            if (!text) {
                diags.push_back({s.path("genesis"), "readable", "cannot read " + file.string()});
            } else {
                gj = json::parse(*text, nullptr, false);
                if (gj.is_discarded()) {
                    diags.push_back({s.path("genesis"), "json", "genesis file is not valid JSON"});
                } else if (canonical_dump(gj) != *text) {
                    diags.push_back({s.path("genesis"), "canonical", "genesis file is not in canonical form"});
                }
            }
        } else {
            gj = s.at("genesis");
        }
        if (!gj.is_null() && !gj.is_discarded()) {
            sc.source["side_chains"][i]["genesis"] = gj; // keep runs self-contained
            side.genesis = parse_genesis(gj, v, s.path("genesis"), diags);
            check_genesis_supply(side.genesis, sc.token.total_supply, sc.contracts.entrance_fee_minimum,
                                 s.path("genesis"), diags);
            side.genesis_text = canonical_text(side.genesis);
        }
        side.block_interval = s.get<std::uint64_t>("block_interval", 1);
        if (side.block_interval == 0) diags.push_back({s.path("block_interval"), "positive", "must be at least 1"});
        side.omega = s.get<std::uint64_t>("omega", 2);
        side.sc_a = s.get<Address>("sc_a", {}, true);
        side.owners = s.get<std::vector<Address>>("owners", {}, true);
        side.multisig_required = s.get<std::uint32_t>("multisig_required", 2);
        if (side.multisig_required == 0 || side.multisig_required > side.owners.size()) {
            diags.push_back({s.path("multisig_required"), "multisig", "need 1 <= required <= number of owners"});
        }
        if (s.has("threshold")) side.threshold = s.get<std::uint32_t>("threshold", 0);
        side.accounts = s.get<std::vector<Address>>("accounts", {});
        side.initial_height = s.get<std::uint64_t>("initial_height", 0);
        if (v == SideVariant::Gasless && side.initial_height != 0) {
            diags.push_back({s.path("initial_height"), "gasless-fresh", "a gasless side chain starts at its genesis"});
        }
        side.publish_genesis = s.get<bool>("publish_genesis", true);
        side.bank_per_transfer_approval = s.get<bool>("bank_per_transfer_approval", false);

        if (!chain_ids.insert(side.genesis.chain_id).second) {
            diags.push_back({s.path("genesis") + ".Chain_ID", "unique", "chain id already used by another chain"});
        }
        if (!token_contracts.insert(side.sc_a).second || sc.token.accounts.contains(side.sc_a)) {
            diags.push_back({s.path("sc_a"), "unique", "SC_A address collides with another token-chain address"});
        }
        auto n = static_cast<std::uint32_t>(side.genesis.witnesses.size());
        std::uint32_t th = opts.threshold_override.value_or(side.threshold.value_or(default_threshold(n)));
        if (!opts.threshold_override && !is_safe_threshold(th, n)) {
            diags.push_back({s.path("threshold"), "threshold-majority",
                             "threshold " + std::to_string(th) + " must exceed N/2 and not exceed N = " +
                                 std::to_string(n)});
        }
        if (opts.threshold_override) side.threshold = *opts.threshold_override;
        sc.sides.push_back(std::move(side));
    }
    if (sc.token.accounts.contains(sc.contracts.sc_id)) {
        diags.push_back({"scenario.contracts.sc_id", "unique", "SC_ID collides with an account"});
    }

    // witnesses
    json wj = j.value("witnesses", json::array());
    std::set<Address> token_witness_addrs;
    for (std::size_t i = 0; i < wj.size(); ++i) {
        std::string path = "scenario.witnesses[" + std::to_string(i) + "]";
        detail::Reader w(wj[i], path, diags);
        w.only({"chain_id", "address_token_chain", "address_side_chain", "behavior"});
        WitnessConfig cfg;
        cfg.chain_id = w.get<Address>("chain_id", {}, true);
        cfg.token_address = w.get<Address>("address_token_chain", {}, true);
        cfg.side_address = w.get<Address>("address_side_chain", {}, true);
        auto b = behavior_from_string(w.get<std::string>("behavior", "honest"));
        if (!b) diags.push_back({w.path("behavior"), "enum", "unknown witness behavior"});
        cfg.behavior = b.value_or(Behavior::Honest);
        const SideChainConfig* side = sc.side(cfg.chain_id);
        if (!side) diags.push_back({w.path("chain_id"), "reference", "no side chain with this chain id"});
        if (!sc.token.accounts.contains(cfg.token_address)) {
            diags.push_back({w.path("address_token_chain"), "valid-account",
                             "witness needs an account on the token chain"});
        }
        if (!token_witness_addrs.insert(cfg.token_address).second) {
            diags.push_back({w.path("address_token_chain"), "unique", "token-chain address shared by two witnesses"});
        }
        if (side) {
            const auto& list = side->genesis.witnesses;
            if (std::find(list.begin(), list.end(), cfg.side_address) == list.end()) {
                diags.push_back({w.path("address_side_chain"), "listed", "not in the genesis Wit_Addr_List"});
            }
        }
        sc.witnesses.push_back(cfg);
    }
    for (std::size_t i = 0; i < sc.sides.size(); ++i) {
        auto ws = sc.witnesses_of(sc.sides[i].genesis.chain_id);
        if (ws.size() != sc.sides[i].genesis.witnesses.size()) {
            diags.push_back({"scenario.side_chains[" + std::to_string(i) + "].genesis.Wit_Addr_List", "witness-set",
                             "every listed witness needs exactly one witness entry"});
        }
    }

    // faults
    json fj = j.value("fault_plan", json::object());
    detail::Reader f(fj, "scenario.fault_plan", diags);
    f.only({"drop_rate", "dup_rate", "max_delay", "max_drops_per_message", "reorgs", "witness_behaviors"});
    sc.faults.drop_rate = f.get<double>("drop_rate", 0.0);
    sc.faults.dup_rate = f.get<double>("dup_rate", 0.0);
    detail::check_probability(sc.faults.drop_rate, f.path("drop_rate"), diags);
    detail::check_probability(sc.faults.dup_rate, f.path("dup_rate"), diags);
    sc.faults.max_delay = f.get<std::uint64_t>("max_delay", 1);
    if (sc.faults.max_delay == 0) diags.push_back({f.path("max_delay"), "positive", "must be at least 1"});
    sc.faults.max_drops_per_message = f.get<std::uint32_t>("max_drops_per_message", 3);
    json rj = fj.is_object() ? fj.value("reorgs", json::array()) : json::array();
    for (std::size_t i = 0; i < rj.size(); ++i) {
        std::string path = f.path("reorgs") + "[" + std::to_string(i) + "]";
        detail::Reader r(rj[i], path, diags);
        r.only({"tick", "trigger", "chain", "depth", "exclude"});
        ReorgPlan plan;
        if (r.has("tick")) plan.tick = r.get<std::uint64_t>("tick", 0);
        plan.trigger = r.get<std::string>("trigger", "");
        if (!plan.tick && plan.trigger.empty()) diags.push_back({path, "schedule", "needs a tick or a trigger"});
        if (!plan.trigger.empty() && plan.trigger != "first_unlock" && plan.trigger != "first_inbound") {
            diags.push_back({r.path("trigger"), "enum", "expected 'first_unlock' or 'first_inbound'"});
        }
        plan.chain = r.get<Address>("chain", {}, true);
        if (!chain_ids.contains(plan.chain)) diags.push_back({r.path("chain"), "reference", "unknown chain"});
        plan.depth = r.get<std::uint64_t>("depth", 0, true);
        for (const auto& k : r.get<std::vector<std::string>>("exclude", {})) {
            auto kind = payload_kind_from_string(k);
            if (!kind) diags.push_back({r.path("exclude"), "enum", "unknown payload kind '" + k + "'"});
            else plan.exclude.push_back(*kind);
        }
        sc.faults.reorgs.push_back(plan);
    }
    json bj = fj.is_object() ? fj.value("witness_behaviors", json::object()) : json::object();
    for (const auto& [k, v] : bj.items()) {
        std::string path = f.path("witness_behaviors") + "." + k;
        try {
            Address a = Address::from_hex(k);
            auto b = behavior_from_string(v.get<std::string>());
            if (!b) throw ParseError("unknown witness behavior");
            if (!token_witness_addrs.contains(a)) throw ParseError("not a witness token-chain address");
            sc.faults.witness_behaviors[a] = *b;
        } catch (const std::exception& e) {
            diags.push_back({path, "witness-behavior", e.what()});
        }
    }
    for (auto& w : sc.witnesses) {
        auto it = sc.faults.witness_behaviors.find(w.token_address);
        if (it != sc.faults.witness_behaviors.end()) w.behavior = it->second;
    }

    // workload
    json lj = j.value("workload", json::array());
    for (std::size_t i = 0; i < lj.size(); ++i) {
        std::string path = "scenario.workload[" + std::to_string(i) + "]";
        detail::Reader r(lj[i], path, diags);
        r.only({"tick", "action", "chain_id", "from", "to", "value", "genesis_hash", "data"});
        WorkItem item;
        item.tick = r.get<std::uint64_t>("tick", 0, true);
        auto action = detail::work_action_from_string(r.get<std::string>("action", "", true));
        if (!action) {
            diags.push_back({r.path("action"), "enum", "unknown workload action"});
            continue;
        }
        item.action = *action;
        item.from = r.get<Address>("from", {}, true);
        item.to = r.get<Address>("to", {}, true);
        item.value = r.get<TokenAmount>("value", {});
        item.data = r.get<std::string>("data", "");
        if (r.has("genesis_hash")) item.genesis_hash = r.get<Digest>("genesis_hash", {});
        const SideChainConfig* side = nullptr;
        if (item.action != WorkAction::Transfer) {
            item.chain_id = r.get<Address>("chain_id", {}, true);
            side = sc.side(item.chain_id);
            if (!side && r.has("chain_id")) diags.push_back({r.path("chain_id"), "reference", "no such side chain"});
        }
        auto on_token = [&](const Address& a) { return sc.token.accounts.contains(a); };
        auto on_side = [&](const Address& a) {
            return side && std::find(side->accounts.begin(), side->accounts.end(), a) != side->accounts.end();
        };
        auto require = [&](bool ok, const char* field, const char* where) {
            if (!ok) diags.push_back({r.path(field), "address-exists", std::string("not an account on ") + where});
        };
        switch (item.action) {
        case WorkAction::Register:
        case WorkAction::Deposit:
            require(on_token(item.from), "from", "the token chain");
            require(on_side(item.to), "to", "the side chain");
            break;
        case WorkAction::Withdraw:
            require(on_side(item.from), "from", "the side chain");
            require(on_token(item.to), "to", "the token chain");
            break;
        case WorkAction::Trade:
        case WorkAction::IotRecord:
            require(on_side(item.from), "from", "the side chain");
            require(on_side(item.to), "to", "the side chain");
            break;
        case WorkAction::Transfer:
            require(on_token(item.from), "from", "the token chain");
            require(on_token(item.to), "to", "the token chain");
            break;
        }
        sc.workload.push_back(item);
    }
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path, ParseOptions opts = {})
{
    auto text = detail::read_file(path);
    if (!text) throw ScenarioInvalid({{path.string(), "readable", "cannot read scenario file"}});
    json j = json::parse(*text, nullptr, false);
    if (j.is_discarded()) throw ScenarioInvalid({{path.string(), "json", "scenario is not valid JSON"}});
    if (opts.base_dir == ".") opts.base_dir = path.parent_path();
    Diagnostics d;
    Scenario sc = parse_scenario(j, opts, d);
    if (!d.empty()) throw ScenarioInvalid(std::move(d));
    return sc;
}

inline Scenario scenario_from_json(const json& j, const ParseOptions& opts = {})
{
    Diagnostics d;
    Scenario sc = parse_scenario(j, opts, d);
    if (!d.empty()) throw ScenarioInvalid(std::move(d));
    return sc;
}

} // namespace bridgesim
