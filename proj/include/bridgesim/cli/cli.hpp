#pragma once

#include <atomic>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bridgesim/sim/report.hpp"

namespace bridgesim::cli {

enum Exit : int { Pass = 0, Invalid = 1, InvariantFailure = 2, Divergence = 3 };

inline void print_diagnostics(const Diagnostics& d, std::ostream& err)
{
    for (const auto& x : d) err << "  " << format(x) << "\n";
}

inline std::optional<GateMode> parse_mode(const std::string& s)
{
    if (s == "conservation") return GateMode::Conservation;
    if (s == "strict") return GateMode::Strict;
    return std::nullopt;
}

/// A standalone genesis file is recognised by its top-level Chain_ID.
inline Diagnostics validate_genesis_file(const std::string& text, std::optional<std::uint64_t> total_supply,
                                         std::uint64_t entrance_fee_minimum)
{
    Diagnostics d;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return {{"genesis", "json", "not valid JSON"}};
    if (canonical_dump(j) != text) d.push_back({"genesis", "canonical", "file is not in canonical form"});
    SideVariant v = infer_variant(j);
    GenesisSpec g = parse_genesis(j, v, "genesis", d);
    if (v == SideVariant::Gasless) {
        if (!total_supply) {
            d.push_back({"genesis", "supply-identity", "--total-supply is needed to check Bal_Resv + Bal_Bank"});
        } else {
            check_genesis_supply(g, TokenAmount{*total_supply}, TokenAmount{entrance_fee_minimum}, "genesis", d);
        }
    }
    return d;
}

inline int cmd_validate(const std::string& path, std::optional<std::uint64_t> total_supply,
                        std::uint64_t entrance_fee_minimum, std::ostream& out, std::ostream& err)
{
    auto text = detail::read_file(path);
    if (!text) {
        err << "cannot read " << path << "\n";
        return Invalid;
    }
    json j = json::parse(*text, nullptr, false);
    Diagnostics d;
    if (j.is_object() && j.contains("Chain_ID")) {
        d = validate_genesis_file(*text, total_supply, entrance_fee_minimum);
    } else {
        try {
            load_scenario(path);
        } catch (const ScenarioInvalid& e) {
            d = e.diagnostics;
        }
    }
    if (!d.empty()) {
        err << path << ": invalid\n";
        print_diagnostics(d, err);
        return Invalid;
    }
    out << path << ": ok\n";
    return Pass;
}

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_ticks;
    std::string trace_out;
    std::string mode;
    std::optional<std::uint32_t> unsafe_threshold;
    std::string seeds; // "A..B"
};

inline bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
}

inline std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_seed_range(const std::string& s)
{
    auto dots = s.find("..");
    if (dots == std::string::npos) return std::nullopt;
    try {
        std::size_t n1 = 0, n2 = 0;
        auto a = std::stoull(s.substr(0, dots), &n1);
        auto b = std::stoull(s.substr(dots + 2), &n2);
        if (n1 != dots || n2 != s.size() - dots - 2 || a > b) return std::nullopt;
        return std::pair{a, b};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline int cmd_run(const std::string& path, const RunFlags& f, std::ostream& out, std::ostream& err)
{
    RunOptions opts;
    opts.seed = f.seed;
    opts.max_ticks = f.max_ticks;
    opts.threshold_override = f.unsafe_threshold;
    if (!f.mode.empty()) {
        opts.mode = parse_mode(f.mode);
        if (!opts.mode) {
            err << "--mode must be conservation or strict\n";
            return Invalid;
        }
    }
    Scenario sc;
    try {
        sc = load_scenario(path, ParseOptions{".", f.unsafe_threshold});
    } catch (const ScenarioInvalid& e) {
        err << path << ": invalid\n";
        print_diagnostics(e.diagnostics, err);
        return Invalid;
    }
    if (f.unsafe_threshold) err << "warning: quorum threshold overridden to " << *f.unsafe_threshold << "\n";

    if (f.seeds.empty()) {
        RunResult r = run_scenario(sc, opts);
        if (!f.trace_out.empty() && !write_file(f.trace_out, r.trace.text())) {
            err << "cannot write " << f.trace_out << "\n";
            return Invalid;
        }
        out << format_report(r);
        return r.invariants_ok ? Pass : InvariantFailure;
    }

    auto range = parse_seed_range(f.seeds);
    if (!range) {
        err << "--seeds expects A..B with A <= B\n";
        return Invalid;
    }
    std::uint64_t count = range->second - range->first + 1;
    std::vector<RunResult> results(count);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i; (i = next++) < count;) {
            RunOptions o = opts;
            o.seed = range->first + i;
            results[i] = run_scenario(sc, o);
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), count));
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool ok = true;
    for (std::uint64_t i = 0; i < count; ++i) {
        const RunResult& r = results[i];
        std::uint64_t seed = range->first + i;
        if (!f.trace_out.empty() && !write_file(f.trace_out + "." + std::to_string(seed), r.trace.text())) {
            err << "cannot write trace for seed " << seed << "\n";
            return Invalid;
        }
        out << "seed " << seed << ": " << (r.invariants_ok ? "pass" : "FAIL");
        for (const auto& name : r.failed()) out << " " << name;
        out << "\n";
        ok = ok && r.invariants_ok;
    }
    return ok ? Pass : InvariantFailure;
}

/// `line` with the mode it records replaced by `mode`.
inline std::string relabel_mode(const std::string& line, const json& mode)
{
    json j = json::parse(line);
    if (j["kind"] == "header") j["payload"]["mode"] = mode;
    else if (j["kind"] == "end") j["payload"]["summary"]["mode"] = mode;
    else return line;
    return canonical_dump(j);
}

/// Re-executes the run a trace header describes and compares line by line.
inline int replay_lines(const std::vector<std::string>& lines, const std::string& mode_flag, std::ostream& out,
                        std::ostream& err)
{
    if (lines.empty()) {
        err << "divergence at line 1: empty trace\n";
        return Divergence;
    }
    json h = json::parse(lines[0], nullptr, false);
    if (h.is_discarded() || h.value("kind", "") != "header" || !h.contains("payload")) {
        err << "divergence at line 1: no trace header\n";
        return Divergence;
    }
    const json& p = h["payload"];
    Scenario sc;
    RunOptions opts;
    try {
        if (p.at("artifact_version") != artifact_version) {
            err << "divergence at line 1: trace written by " << p.at("artifact_version").dump() << "\n";
            return Divergence;
        }
        if (p.at("digest_algorithm") != digest_algorithm) {
            err << "divergence at line 1: digest algorithm " << p.at("digest_algorithm").dump() << "\n";
            return Divergence;
        }
        if (canonical_digest(p.at("scenario")) != p.at("scenario_digest").get<Digest>()) {
            err << "divergence at line 1: scenario does not match its recorded digest\n";
            return Divergence;
        }
        ParseOptions po;
        if (!p.at("threshold_override").is_null()) po.threshold_override = p.at("threshold_override").get<std::uint32_t>();
        sc = scenario_from_json(p.at("scenario"), po);
        opts.seed = p.at("seed").get<std::uint64_t>();
        opts.max_ticks = p.at("max_ticks").get<std::uint64_t>();
        opts.mode = parse_mode(p.at("mode").get<std::string>());
        opts.threshold_override = po.threshold_override;
    } catch (const std::exception& e) {
        err << "divergence at line 1: unusable header (" << e.what() << ")\n";
        return Divergence;
    }
    if (!mode_flag.empty()) {
        opts.mode = parse_mode(mode_flag);
        if (!opts.mode) {
            err << "--mode must be conservation or strict\n";
            return Invalid;
        }
    }
    RunResult r = run_scenario(sc, opts);
    std::vector<std::string> fresh = r.trace.lines();
    if (!mode_flag.empty()) {
        // the mode label itself is not a semantic difference
        for (auto& line : fresh) line = relabel_mode(line, p.at("mode"));
    }
    std::size_t n = std::min(fresh.size(), lines.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (fresh[i] != lines[i]) {
            err << "divergence at line " << i + 1 << "\n  recorded: " << lines[i].substr(0, 400)
                << "\n  replayed: " << fresh[i].substr(0, 400) << "\n";
            return Divergence;
        }
    }
    if (fresh.size() != lines.size()) {
        err << "divergence at line " << n + 1 << ": recorded " << lines.size() << " lines, replay produced "
            << fresh.size() << "\n";
        return Divergence;
    }
    out << "replay identical (" << lines.size() << " records)\n";
    return Pass;
}

inline int cmd_replay(const std::string& path, const std::string& mode_flag, std::ostream& out, std::ostream& err)
{
    auto text = detail::read_file(path);
    if (!text) {
        err << "cannot read " << path << "\n";
        return Invalid;
    }
    std::vector<std::string> lines;
    std::istringstream in(*text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return replay_lines(lines, mode_flag, out, err);
}

/// Entry point shared by the executable and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deterministic simulator of a notary-based cross-chain token bridge"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::uint64_t> total_supply;
    std::uint64_t fee_min = 0;
    auto* validate = app.add_subcommand("validate", "Statically check a scenario or genesis file");
    validate->add_option("file", file, "scenario or genesis JSON")->required();
    validate->add_option("--total-supply", total_supply, "token supply, for standalone gasless genesis files");
    validate->add_option("--entrance-fee-minimum", fee_min, "entrance-fee bound, for standalone genesis files");

    RunFlags flags;
    auto* run = app.add_subcommand("run", "Run a scenario and check invariants");
    run->add_option("file", file, "scenario JSON")->required();
    run->add_option("--seed", flags.seed, "override the scenario seed");
    run->add_option("--max-ticks", flags.max_ticks, "override the tick budget");
    run->add_option("--trace-out", flags.trace_out, "write the trace here");
    run->add_option("--mode", flags.mode, "conservation | strict");
    run->add_option("--unsafe-threshold", flags.unsafe_threshold, "force every quorum threshold (may be unsafe)");
    run->add_option("--seeds", flags.seeds, "run seeds A..B in parallel");

    std::string replay_mode;
    auto* replay = app.add_subcommand("replay", "Re-execute a trace and compare");
    replay->add_option("trace", file, "trace file")->required();
    replay->add_option("--mode", replay_mode, "replay under a different gate mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Pass : Invalid;
    }
    try {
        if (*validate) return cmd_validate(file, total_supply, fee_min, out, err);
        if (*run) return cmd_run(file, flags, out, err);
        return cmd_replay(file, replay_mode, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Invalid;
    }
}

} // namespace bridgesim::cli
