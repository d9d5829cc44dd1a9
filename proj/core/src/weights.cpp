#include "qpo/weights.hpp"

#include <charconv>
#include <stdexcept>

#include "qpo/summation.hpp"

namespace qpo {
namespace {

// 75 * ln(10): exponents past this make the weight < 1e-75 of the peak.
const __float128 kExpCutoff = 75 * logq(10);
// Iterated bump: the outer exponent is exp(1/(t(1-t))); the same cutoff
// applies to it, compared in log form to avoid computing the huge exp.
const __float128 kIterCutoff = logq(kExpCutoff);

}  // namespace

WeightKind WeightKind::bump(int p) {
    if (p < 1) throw std::invalid_argument("WeightKind::bump: order must be >= 1");
    return {WeightFamily::bump, p};
}

std::string WeightKind::name() const {
    switch (family) {
        case WeightFamily::uniform: return "uniform";
        case WeightFamily::bump: return "bump" + std::to_string(order);
        case WeightFamily::iterated_bump: return "iterated";
    }
    throw std::logic_error("WeightKind::name: bad family");
}

WeightKind WeightKind::from_name(std::string_view name) {
    if (name == "uniform") return uniform();
    if (name == "iterated") return iterated_bump();
    if (name.starts_with("bump")) {
        int p = 0;
        const char* first = name.data() + 4;
        const char* last = name.data() + name.size();
        auto [ptr, ec] = std::from_chars(first, last, p);
        if (ec == std::errc() && ptr == last && p >= 1) return bump(p);
    }
    throw std::invalid_argument("WeightKind::from_name: unknown kind '" + std::string(name) +
                                "' (want uniform, bump<p>, or iterated)");
}

XReal weight_raw(const WeightKind& kind, const XReal& t) {
    const __float128 tv = t.raw();
    if (kind.family == WeightFamily::uniform)
        return (tv >= 0 && tv < 1) ? XReal(1) : XReal(0);
    if (tv <= 0 || tv >= 1) return XReal(0);

    const __float128 q = tv * (1 - tv);  // in (0, 1/4]
    if (kind.family == WeightFamily::bump) {
        __float128 inner = 1;
        for (int i = 0; i < kind.order; ++i) inner /= q;
        if (inner > kExpCutoff) return XReal(0);
        return XReal(expq(-inner));
    }
    // iterated bump
    const __float128 inner = 1 / q;
    if (inner > kIterCutoff) return XReal(0);
    return XReal(expq(-expq(inner)));
}

WeightTable::WeightTable(WeightKind kind, std::size_t n_total) : kind_(kind) {
    if (n_total < 2) throw std::invalid_argument("WeightTable: need at least 2 samples");
    w_.resize(n_total);
    const XReal n_inv = XReal(1) / XReal(n_total);
    for (std::size_t n = 0; n < n_total; ++n)
        w_[n] = weight_raw(kind_, XReal(n) * n_inv);
    const XReal total = pairwise_sum(std::span<const XReal>(w_));
    if (!(total > XReal(0)))
        throw std::domain_error("WeightTable: window vanished on all sample points");
    const XReal scale = XReal(1) / total;
    for (XReal& w : w_) w *= scale;
}

XReal wb_average(std::span<const XReal> samples, const WeightTable& table) {
    if (samples.size() != table.size())
        throw std::invalid_argument("wb_average: sample/weight size mismatch");
    return pairwise_weighted_sum(table.weights(), samples);
}

XComplex wb_average(std::span<const XComplex> samples, const WeightTable& table) {
    if (samples.size() != table.size())
        throw std::invalid_argument("wb_average: sample/weight size mismatch");
    return pairwise_weighted_sum(table.weights(), samples);
}

std::vector<std::pair<std::size_t, XComplex>> convergence_profile(
    const std::function<XComplex(std::size_t)>& sample_at, WeightKind kind,
    std::span<const std::size_t> checkpoints) {
    if (checkpoints.empty())
        throw std::invalid_argument("convergence_profile: no checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 2 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw std::invalid_argument(
                "convergence_profile: checkpoints must be strictly increasing and >= 2");
    }

    const std::size_t n_max = checkpoints.back();
    std::vector<XComplex> samples(n_max);
    for (std::size_t n = 0; n < n_max; ++n) samples[n] = sample_at(n);

    std::vector<std::pair<std::size_t, XComplex>> out;
    out.reserve(checkpoints.size());
    for (std::size_t n : checkpoints) {
        WeightTable table(kind, n);
        out.emplace_back(n, wb_average(std::span<const XComplex>(samples.data(), n), table));
    }
    return out;
}

}  // namespace qpo
