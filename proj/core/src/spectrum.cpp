#include "qpo/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "qpo/summation.hpp"

namespace qpo {
namespace {

constexpr std::size_t kChunk = 1024;  // samples per partial sum
constexpr std::size_t kBatch = 64;    // modes advanced per phase anchor

struct PhasedSamples {
    std::vector<XReal> phase;  // frac(n * rho)
    std::vector<XComplex> v;   // w_n * z_n
};

PhasedSamples prepare(std::span<const XComplex> samples, const XReal& rho,
                      const WeightTable& table) {
    PhasedSamples ps;
    const std::size_t n = samples.size();
    ps.phase.resize(n);
    ps.v.resize(n);
    XReal p(0);
    const XReal step = frac(rho);
    for (std::size_t i = 0; i < n; ++i) {
        ps.phase[i] = p;
        ps.v[i] = table[i] * samples[i];
        p = frac(p + step);
    }
    return ps;
}

XComplex chunked_mode_sum(const PhasedSamples& ps, const XReal& k) {
    const std::size_t n = ps.v.size();
    std::vector<XComplex> chunk_sums;
    chunk_sums.reserve(n / kChunk + 1);
    for (std::size_t c0 = 0; c0 < n; c0 += kChunk) {
        const std::size_t c1 = std::min(n, c0 + kChunk);
        XComplex acc;
        for (std::size_t i = c0; i < c1; ++i)
            acc += ps.v[i] * conj(exp_i2pi(frac(k * ps.phase[i])));
        chunk_sums.push_back(acc);
    }
    return pairwise_sum(std::span<const XComplex>(chunk_sums));
}

// Modes k0..k0+width-1 in one pass: anchor the phase at k0 exactly, then
// advance mode-by-mode with one unit-modulus multiply each (at most
// kBatch-1 of them, so the drift stays at a few ulp).
void mode_batch(const PhasedSamples& ps, std::span<const XComplex> u, std::size_t k0,
                std::size_t width, XComplex* out) {
    const std::size_t n = ps.v.size();
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<XComplex>> chunk_sums(width);
    for (auto& cs : chunk_sums) cs.reserve(n_chunks);

    std::vector<XComplex> local(width);
    const XReal k0x(k0);
    for (std::size_t c0 = 0; c0 < n; c0 += kChunk) {
        const std::size_t c1 = std::min(n, c0 + kChunk);
        std::fill(local.begin(), local.end(), XComplex());
        for (std::size_t i = c0; i < c1; ++i) {
            XComplex w = (k0 == 0) ? ps.v[i]
                                   : ps.v[i] * conj(exp_i2pi(frac(k0x * ps.phase[i])));
            const XComplex& ui = u[i];
            for (std::size_t b = 0; b < width; ++b) {
                local[b] += w;
                w *= ui;
            }
        }
        for (std::size_t b = 0; b < width; ++b) chunk_sums[b].push_back(local[b]);
    }
    for (std::size_t b = 0; b < width; ++b)
        out[b] = pairwise_sum(std::span<const XComplex>(chunk_sums[b]));
}

}  // namespace

fit_error::fit_error(const std::string& why) : std::runtime_error("r0 fit failed: " + why) {}

XComplex fourier_coefficient(std::span<const XComplex> samples, const XReal& rho,
                             std::size_t k, WeightKind kind) {
    WeightTable table(kind, samples.size());
    PhasedSamples ps = prepare(samples, rho, table);
    return chunked_mode_sum(ps, XReal(k));
}

Spectrum build_spectrum(std::span<const XComplex> samples, const XReal& rho,
                        std::size_t k_max, const SpectrumOptions& opts) {
    Spectrum spec;
    spec.rho = rho;
    spec.kind = opts.kind;
    spec.n_samples = samples.size();
    spec.noise_floor = opts.noise_floor;
    spec.coeffs.assign(k_max + 1, XComplex());

    WeightTable table(opts.kind, samples.size());
    const PhasedSamples ps = prepare(samples, rho, table);
    std::vector<XComplex> u(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) u[i] = conj(exp_i2pi(ps.phase[i]));

    unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;

    const std::size_t n_batches = (k_max + kBatch) / kBatch;
    std::size_t consecutive_low = 0;
    std::size_t scanned = 0;  // modes checked by the early-stop scan
    bool stopped = false;

    for (std::size_t wave = 0; wave < n_batches && !stopped; wave += threads) {
        const std::size_t wave_end = std::min(n_batches, wave + threads);
        auto run_batch = [&](std::size_t batch) {
            const std::size_t k0 = batch * kBatch;
            const std::size_t width = std::min(kBatch, k_max + 1 - k0);
            mode_batch(ps, u, k0, width, spec.coeffs.data() + k0);
        };
        if (wave_end - wave == 1) {
            run_batch(wave);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t b = wave; b < wave_end; ++b)
                pool.emplace_back(run_batch, b);
            for (auto& th : pool) th.join();
        }

        if (!opts.early_stop) continue;
        const std::size_t computed = std::min(k_max + 1, wave_end * kBatch);
        for (; scanned < computed; ++scanned) {
            if (abs(spec.coeffs[scanned]) < opts.noise_floor) {
                if (++consecutive_low == 50) {
                    spec.coeffs.resize(scanned + 1);
                    stopped = true;
                    break;
                }
            } else {
                consecutive_low = 0;
            }
        }
    }
    return spec;
}

R0Fit fit_r0(const Spectrum& spec) {
    const auto& b = spec.coeffs;
    XReal peak(0);
    for (const XComplex& c : b) {
        XReal m = abs(c);
        if (m > peak) peak = m;
    }
    if (!(peak > XReal(0))) throw fit_error("spectrum is identically zero");

    const XReal lo = spec.noise_floor * XReal(100);
    const XReal hi = peak * XReal(0.01);
    if (!(lo < hi)) throw fit_error("noise floor too close to the peak magnitude");

    std::vector<std::pair<std::size_t, XReal>> usable;
    for (std::size_t k = 5; k < b.size(); ++k) {
        const XReal m = abs(b[k]);
        if (m > lo && m < hi) usable.emplace_back(k, log(m));
    }
    if (usable.size() < 16)
        throw fit_error("only " + std::to_string(usable.size()) +
                        " usable modes between noise floor and peak (need 16)");

    // The low-order coefficients carry a transient profile on top of the
    // geometric decay, which tilts a whole-window fit; the asymptotic slope
    // is extracted from the upper half of the usable range.
    std::vector<std::pair<XReal, XReal>> pts;
    for (std::size_t i = usable.size() / 2; i < usable.size(); ++i)
        pts.emplace_back(XReal(usable[i].first), usable[i].second);

    R0Fit fit;
    fit.k_first = usable[usable.size() / 2].first;
    fit.k_last = usable.back().first;
    fit.n_points = pts.size();
    XReal sx(0), sy(0), sxx(0), sxy(0);
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }

    const XReal n(fit.n_points);
    const XReal det = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r0 = exp(fit.slope);

    XReal ss(0);
    for (const auto& [x, y] : pts) {
        const XReal r = y - (fit.slope * x + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = sqrt(ss / n);
    return fit;
}

ConjugacySeries power_series(const Spectrum& spec, const XReal& r0) {
    if (!(r0 > XReal(0) && r0 < XReal(1)))
        throw std::invalid_argument("power_series: r0 must be in (0, 1)");
    ConjugacySeries s;
    s.r0 = r0;
    s.a.resize(spec.coeffs.size());
    const XReal inv = XReal(1) / r0;
    XReal scale(1);
    for (std::size_t k = 0; k < spec.coeffs.size(); ++k) {
        s.a[k] = scale * spec.coeffs[k];
        scale *= inv;
    }
    return s;
}

XComplex evaluate_curve(const ConjugacySeries& series, const XReal& r, const XReal& theta) {
    if (series.a.empty()) throw std::invalid_argument("evaluate_curve: empty series");
    if (!(r >= XReal(0) && r < XReal(1)))
        throw std::invalid_argument("evaluate_curve: radius must be in [0, 1)");
    const XComplex umode = exp_i2pi(theta);
    const XComplex u{r * umode.re, r * umode.im};
    XComplex acc = series.a.back();
    for (std::size_t k = series.a.size() - 1; k-- > 0;) acc = acc * u + series.a[k];
    return acc;
}

std::vector<XComplex> reconstruct_trajectory(const Spectrum& spec, std::size_t n_points) {
    if (spec.coeffs.empty()) throw std::invalid_argument("reconstruct: empty spectrum");
    std::vector<XComplex> out(n_points);
    XReal p(0);
    const XReal step = frac(spec.rho);
    for (std::size_t n = 0; n < n_points; ++n) {
        const XComplex u = exp_i2pi(p);
        XComplex acc = spec.coeffs.back();
        for (std::size_t k = spec.coeffs.size() - 1; k-- > 0;) acc = acc * u + spec.coeffs[k];
        out[n] = acc;
        p = frac(p + step);
    }
    return out;
}

XReal l2_length_direct(const ConjugacySeries& series, const XReal& r) {
    if (!(r >= XReal(0) && r < XReal(1)))
        throw std::invalid_argument("l2_length_direct: radius must be in [0, 1)");
    const XReal r2 = r * r;
    std::vector<XReal> terms;
    terms.reserve(series.a.size());
    XReal r2k = r2;
    for (std::size_t k = 1; k < series.a.size(); ++k) {
        terms.push_back(XReal(k) * XReal(k) * norm_sq(series.a[k]) * r2k);
        r2k *= r2;
    }
    const XReal sum = terms.empty() ? XReal(0) : pairwise_sum(std::span<const XReal>(terms));
    return constants::two_pi() * sqrt(sum);
}

XReal l2_length_bound(const XReal& c, const XReal& r) {
    if (!(c > XReal(0)))
        throw std::invalid_argument("l2_length_bound: coefficient bound must be positive");
    if (!(r >= XReal(0) && r < XReal(1)))
        throw std::invalid_argument("l2_length_bound: radius must be in [0, 1)");
    const XReal r2 = r * r;
    const XReal one_minus = XReal(1) - r2;
    return constants::two_pi() * c * sqrt(r2 * (XReal(1) + r2) / (one_minus * one_minus * one_minus));
}

}  // namespace qpo
