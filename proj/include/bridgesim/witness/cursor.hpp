#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bridgesim/core/chain.hpp"

namespace bridgesim {

struct HeightRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;

    bool operator==(const HeightRange&) const = default;
};

/// Position of a witness in one source chain. Windows are `width` blocks wide
/// (ω, or 1 when ω = 0) and a window ending at h_l is collected only once the
/// head has reached h_l + ω, so nothing a reorg of depth ≤ ω can touch is read.
class RelayCursor {
public:
    /// Cursor whose first window starts at the genesis block.
    static RelayCursor from_genesis(std::uint64_t omega)
    {
        RelayCursor c(omega);
        c.h_l_ = c.width_ - 1;
        return c;
    }

    /// First-time formation at head h: window [h-2ω+1, h-ω] (for ω ≥ 1).
    /// Returns nullopt while that window would start below height 0.
    static std::optional<std::pair<RelayCursor, HeightRange>> first_time(std::uint64_t head, std::uint64_t omega)
    {
        RelayCursor c(omega);
        if (head < omega + c.width_ - 1) return std::nullopt;
        HeightRange w{head - omega - c.width_ + 1, head - omega};
        c.h_l_ = w.last + c.width_;
        c.first_ = false;
        return std::pair{c, w};
    }

    std::uint64_t omega() const { return omega_; }
    std::uint64_t width() const { return width_; }
    /// Last height of the next window.
    std::uint64_t h_l() const { return h_l_; }
    bool first() const { return first_; }
    HeightRange next_window() const { return {h_l_ + 1 - width_, h_l_}; }

    /// The h_l2 ≥ h_l + ω gate.
    bool ready(std::uint64_t head) const { return head >= h_l_ + omega_; }

    void advance()
    {
        h_l_ += width_;
        first_ = false;
    }

private:
    explicit RelayCursor(std::uint64_t omega) : omega_(omega), width_(std::max<std::uint64_t>(omega, 1)) {}

    std::uint64_t omega_;
    std::uint64_t width_;
    std::uint64_t h_l_ = 0;
    bool first_ = true;
};

/// Events of `chain` in `window` emitted by any of `contracts`, in
/// (height, tx index) order.
inline std::vector<Event> collect_events(const Chain& chain, HeightRange window, const std::vector<Address>& contracts)
{
    std::vector<Event> out;
    if (window.first > chain.height()) return out;
    std::uint64_t last = std::min(window.last, chain.height());
    for (std::uint64_t h = window.first; h <= last; ++h) {
        for (const auto& e : chain.block(h).events) {
            if (std::find(contracts.begin(), contracts.end(), e.contract) != contracts.end()) out.push_back(e);
        }
    }
    return out;
}

} // namespace bridgesim
