#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bridgesim/core/canonical.hpp"

namespace bridgesim {

inline constexpr std::string_view artifact_version = "bridgesim-1";

/// Seeded source of all simulation randomness. Draws are derived from raw
/// mt19937_64 output so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }
    /// Draws only when p > 0, so fault-free plans consume no randomness.
    bool chance(double p) { return p > 0 && uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

/// One trace line: {tick, kind, chain, payload} in canonical JSON.
inline std::string trace_line(std::uint64_t tick, std::string_view kind, const std::string& chain, json payload)
{
    return canonical_dump(json{{"tick", tick}, {"kind", kind}, {"chain", chain}, {"payload", std::move(payload)}});
}

class Trace {
public:
    void add(std::uint64_t tick, std::string_view kind, const std::string& chain, json payload)
    {
        lines_.push_back(trace_line(tick, kind, chain, std::move(payload)));
    }

    const std::vector<std::string>& lines() const { return lines_; }

    std::string text() const
    {
        std::string out;
        for (const auto& l : lines_) {
            out += l;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::string> lines_;
};

} // namespace bridgesim
