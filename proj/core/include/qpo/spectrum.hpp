#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"

namespace qpo {

// Fourier data of a quasiperiodic signal z_n sampled along rotation rho:
// coeffs[k] estimates the mode-k coefficient via the weighted average of
// z_n e^{-i 2 pi k n rho}.  Modes are 0..coeffs.size()-1; negative modes
// vanish for the curves treated here, so they are not stored.
struct Spectrum {
    XReal rho;
    WeightKind kind;
    std::size_t n_samples = 0;
    XReal noise_floor;
    std::vector<XComplex> coeffs;
};

// coeffs[k] / r0^k: the Taylor coefficients of the conjugacy scaled to its
// natural radius r0.
struct ConjugacySeries {
    XReal r0;
    std::vector<XComplex> a;
};

class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& why);
};

inline const XReal kDefaultNoiseFloor = XReal(1e-30);

struct SpectrumOptions {
    WeightKind kind = WeightKind::bump(2);
    XReal noise_floor = kDefaultNoiseFloor;
    // Stop once 50 consecutive coefficients fall below the noise floor
    // (the trailing run is kept, later modes are dropped).
    bool early_stop = true;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Single mode k of the sample sequence.
XComplex fourier_coefficient(std::span<const XComplex> samples, const XReal& rho,
                             std::size_t k, WeightKind kind = WeightKind::bump(2));

// All modes 0..k_max (subject to early stop).  Phases are accumulated
// incrementally mod 1 and re-anchored per 64-mode batch, so no mode loses
// accuracy to naive power recurrences.
Spectrum build_spectrum(std::span<const XComplex> samples, const XReal& rho,
                        std::size_t k_max, const SpectrumOptions& opts = {});

struct R0Fit {
    XReal r0;
    XReal slope;      // d ln|coeff| / dk
    XReal intercept;
    XReal residual_rms;
    std::size_t n_points = 0;
    std::size_t k_first = 0;
    std::size_t k_last = 0;
};

// Least-squares slope of ln|coeffs[k]| vs k.  The usable window is k >= 5
// with magnitude at least 100x above the noise floor and 100x below the
// peak; the fit itself uses the upper half of that window, where the decay
// has reached its asymptotic slope.  Good to about three digits.  Throws
// fit_error if the usable window has fewer than 16 modes.
R0Fit fit_r0(const Spectrum& spec);

// Requires 0 < r0 < 1.
ConjugacySeries power_series(const Spectrum& spec, const XReal& r0);

// sum_k a_k (r e^{i 2 pi theta})^k by Horner evaluation.  Requires
// 0 <= r < 1: the series is only trusted inside the open disk.
XComplex evaluate_curve(const ConjugacySeries& series, const XReal& r, const XReal& theta);

// Replays the signal from its spectrum: n-th value is
// sum_k coeffs[k] e^{i 2 pi k frac(n rho)}.
std::vector<XComplex> reconstruct_trajectory(const Spectrum& spec, std::size_t n_points);

// 2 pi sqrt(sum_{k>=1} |k a_k r^k|^2): the L2 mean length of the image
// circle of radius r.  Finite sum over the stored modes; requires
// 0 <= r < 1.
XReal l2_length_direct(const ConjugacySeries& series, const XReal& r);

// Closed-form bound for |a_k| <= c over all k:
// 2 pi c sqrt(r^2 (1 + r^2) / (1 - r^2)^3).  Requires c > 0 and
// 0 <= r < 1.
XReal l2_length_bound(const XReal& c, const XReal& r);

}  // namespace qpo
