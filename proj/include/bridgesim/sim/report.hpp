#pragma once

#include <set>
#include <sstream>
#include <string>

#include "bridgesim/sim/simulator.hpp"

namespace bridgesim {

/// Human-readable report followed by the machine-readable summary block.
inline std::string format_report(const RunResult& r)
{
    std::ostringstream out;
    const json& s = r.summary;
    out << "seed " << s["seed"].get<std::uint64_t>() << ", mode " << s["mode"].get<std::string>() << ", "
        << (r.quiescent ? "quiescent" : "NOT quiescent") << " at tick " << r.end_tick << "\n";
    out << "token chain height " << s["token_height"] << ", registry " << s["registry"].dump() << "\n";
    for (const auto& side : s["side_chains"]) {
        out << "side " << side["chain_id"].get<std::string>() << " (" << side["variant"].get<std::string>() << ")"
            << (side["registered"].get<bool>() ? " registered" : " not registered")
            << ", height " << side["height"] << ", SC_A.locked " << side["sc_a_locked"] << ", circulating "
            << side["circulating"];
        if (side.value("reverted_registrations", 0) > 0) out << ", reverted registrations " << side["reverted_registrations"];
        out << "\n";
    }
    const auto& st = s["stats"];
    out << "blocks " << st["blocks"] << ", sends " << st["sends"] << ", drops " << st["drops"] << ", dups "
        << st["dups"] << ", resends " << st["resends"] << ", reorgs " << st["reorgs"] << ", rejected txs "
        << st["rejected_txs"] << "\n";
    out << "invariant checks: " << r.checks.size() << "\n";
    for (const auto& [name, verdict] : s["invariants"].items()) {
        out << "  " << (verdict == "pass" ? "pass " : "FAIL ") << name << "\n";
    }
    std::set<std::pair<std::string, std::string>> shown;
    for (const auto& c : r.checks) {
        for (const auto& x : c.results) {
            if (x.pass || !shown.insert({x.name, x.detail}).second) continue;
            out << "  tick " << c.tick << " " << x.name << ": " << x.detail << "\n";
        }
    }
    out << "summary " << canonical_dump(s) << "\n";
    return out.str();
}

} // namespace bridgesim
