#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpo/xreal.hpp"

namespace qpo {

enum class WeightFamily { uniform, bump, iterated_bump };

// Selects the averaging window: uniform (the plain ergodic average), the
// C-infinity bump exp(-1/(t(1-t))^p), or the iterated bump
// exp(-exp(1/(t(1-t)))).  Bump order p must be >= 1.
struct WeightKind {
    WeightFamily family = WeightFamily::bump;
    int order = 2;

    static WeightKind uniform() { return {WeightFamily::uniform, 0}; }
    static WeightKind bump(int p);
    static WeightKind iterated_bump() { return {WeightFamily::iterated_bump, 0}; }

    // "uniform", "bump<p>", "iterated"; from_name accepts the same forms.
    std::string name() const;
    static WeightKind from_name(std::string_view name);

    friend bool operator==(const WeightKind& a, const WeightKind& b) {
        return a.family == b.family && (a.family != WeightFamily::bump || a.order == b.order);
    }
    friend bool operator!=(const WeightKind& a, const WeightKind& b) { return !(a == b); }
};

// Unnormalized window value.  Zero outside (0,1) except for uniform, which
// is 1 on [0,1).  Underflow guard: once the inner exponent passes 75*ln(10)
// the weight is a hard 0 (below 1e-75 of the window's peak).
XReal weight_raw(const WeightKind& kind, const XReal& t);

// Normalized weights w[n] = raw(n/N) / sum_j raw(j/N) for n = 0..N-1.
// Requires N >= 2.  sum(w) == 1 to within 1e-30.
class WeightTable {
public:
    WeightTable(WeightKind kind, std::size_t n_total);

    const WeightKind& kind() const { return kind_; }
    std::size_t size() const { return w_.size(); }
    const XReal& operator[](std::size_t n) const { return w_[n]; }
    std::span<const XReal> weights() const { return w_; }

private:
    WeightKind kind_;
    std::vector<XReal> w_;
};

inline WeightTable build_weights(WeightKind kind, std::size_t n_total) {
    return WeightTable(kind, n_total);
}

// Weighted Birkhoff average sum_n w[n] * samples[n]; sizes must match.
XReal wb_average(std::span<const XReal> samples, const WeightTable& table);
XComplex wb_average(std::span<const XComplex> samples, const WeightTable& table);

// Averages of the first N samples for each checkpoint N, each with a fresh
// weight table so every entry is a genuine WB_N.  Checkpoints must be
// strictly increasing, each >= 2.
std::vector<std::pair<std::size_t, XComplex>> convergence_profile(
    const std::function<XComplex(std::size_t)>& sample_at, WeightKind kind,
    std::span<const std::size_t> checkpoints);

}  // namespace qpo
