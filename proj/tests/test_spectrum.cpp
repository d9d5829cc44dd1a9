#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpo/maps.hpp"
#include "qpo/spectrum.hpp"
#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"
#include "support/gen.hpp"
#include "support/mpfr_oracle.hpp"

using oracle::Big;
using oracle::BigC;
using qpo::ConjugacySeries;
using qpo::R0Fit;
using qpo::Spectrum;
using qpo::SpectrumOptions;
using qpo::WeightKind;
using qpo::XComplex;
using qpo::XReal;

namespace {

// z_n = sum_j c_j e^{i 2 pi j n rho} with exact incremental phases.
std::vector<XComplex> modal_signal(const std::vector<std::pair<long, XComplex>>& modes,
                                   const XReal& rho, std::size_t n) {
    std::vector<XComplex> out;
    out.reserve(n);
    XReal phase(0);
    for (std::size_t i = 0; i < n; ++i) {
        XComplex z(XReal(0));
        for (const auto& [j, c] : modes) z += c * qpo::exp_i2pi(XReal(j) * phase);
        out.push_back(z);
        phase = frac(phase + rho);
    }
    return out;
}

Spectrum synthetic_spectrum(std::vector<XComplex> coeffs) {
    Spectrum s;
    s.rho = qpo::constants::golden_mean();
    s.kind = WeightKind::bump(2);
    s.n_samples = 100000;
    s.noise_floor = qpo::kDefaultNoiseFloor;
    s.coeffs = std::move(coeffs);
    return s;
}

Spectrum geometric_spectrum(const XReal& ratio, std::size_t k_max) {
    std::vector<XComplex> coeffs;
    XReal v(1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        coeffs.push_back(XComplex(v));
        v = v * ratio;
    }
    return synthetic_spectrum(std::move(coeffs));
}

}  // namespace

TEST_CASE("single-mode signals concentrate in the matching coefficient") {
    const XReal rho = qpo::constants::golden_mean();
    const std::vector<XComplex> z = modal_signal({{1, XComplex(XReal(3))}}, rho, 16384);

    const XComplex b1 = qpo::fourier_coefficient(z, rho, 1);
    CHECK(abs(b1 - XComplex(XReal(3))) <= XReal::parse("1e-25"));

    const XComplex b2 = qpo::fourier_coefficient(z, rho, 2);
    CHECK(abs(b2) <= XReal::parse("1e-25"));

    const XComplex b0 = qpo::fourier_coefficient(z, rho, 0);
    CHECK(abs(b0) <= XReal::parse("1e-25"));
}

TEST_CASE("spectra agree with the mode-at-a-time path") {
    const XReal rho = qpo::constants::golden_mean();
    const std::vector<XComplex> z = modal_signal(
        {{0, XComplex(XReal::parse("0.4"), XReal::parse("-0.2"))},
         {1, XComplex(XReal(1))},
         {5, XComplex(XReal::parse("0.01"), XReal::parse("0.03"))}},
        rho, 8192);

    const Spectrum spec = build_spectrum(z, rho, 8);
    REQUIRE(spec.coeffs.size() == 9);
    for (std::size_t k : {0u, 1u, 5u, 7u}) {
        const XComplex direct = qpo::fourier_coefficient(z, rho, k);
        CHECK(abs(spec.coeffs[k] - direct) <= XReal::parse("1e-30"));
    }
}

TEST_CASE("two-mode signals round trip through spectrum and replay") {
    const XReal rho = qpo::constants::golden_mean();
    const XComplex c0(XReal::parse("0.4"), XReal::parse("-0.2"));
    const XComplex c1(XReal(1));
    const XComplex c5(XReal::parse("0.01"), XReal::parse("0.03"));
    const std::vector<XComplex> z = modal_signal({{0, c0}, {1, c1}, {5, c5}}, rho, 8192);

    const Spectrum spec = build_spectrum(z, rho, 8);
    CHECK(abs(spec.coeffs[0] - c0) <= XReal::parse("1e-25"));
    CHECK(abs(spec.coeffs[1] - c1) <= XReal::parse("1e-25"));
    CHECK(abs(spec.coeffs[5] - c5) <= XReal::parse("1e-25"));
    CHECK(abs(spec.coeffs[3]) <= XReal::parse("1e-25"));

    const std::vector<XComplex> replay = reconstruct_trajectory(spec, 1000);
    REQUIRE(replay.size() == 1000);
    for (std::size_t n = 0; n < replay.size(); ++n)
        CHECK(abs(replay[n] - z[n]) <= XReal::parse("1e-25"));
}

TEST_CASE("early stop truncates a long run of sub-floor modes") {
    const XReal rho = qpo::constants::golden_mean();
    const std::vector<XComplex> z = modal_signal({{1, XComplex(XReal(1))}}, rho, 16384);

    const Spectrum spec = build_spectrum(z, rho, 200);
    CHECK(spec.coeffs.size() < 200);
    CHECK(spec.coeffs.size() >= 51);

    std::size_t above = 0;
    for (const XComplex& b : spec.coeffs)
        if (abs(b) > spec.noise_floor) ++above;
    CHECK(above == 1);
    CHECK(abs(spec.coeffs[1]) > XReal::parse("0.999"));

    SpectrumOptions keep_all;
    keep_all.early_stop = false;
    const Spectrum full = build_spectrum(z, rho, 200, keep_all);
    CHECK(full.coeffs.size() == 201);
}

TEST_CASE("geometric coefficients fit their own decay ratio") {
    const Spectrum spec = geometric_spectrum(XReal::parse("0.5"), 60);
    const R0Fit fit = fit_r0(spec);

    CHECK(abs(fit.r0 - XReal::parse("0.5")) <= XReal::parse("1e-6"));
    CHECK(fit.residual_rms <= XReal::parse("1e-20"));
    CHECK(fit.k_last == 60);
    CHECK(fit.k_first >= 30);
    CHECK(fit.n_points >= 16);
    CHECK(fit.slope < XReal(0));
}

TEST_CASE("fits demand a wide enough usable window") {
    // Only k = 7..12 sit inside (100x floor, peak/100): six modes, too few.
    const Spectrum narrow = geometric_spectrum(XReal::parse("0.5"), 12);
    CHECK_THROWS_AS(fit_r0(narrow), qpo::fit_error);
    try {
        fit_r0(narrow);
    } catch (const qpo::fit_error& e) {
        CHECK(std::string(e.what()).find("usable") != std::string::npos);
    }

    // Everything at the floor: nothing usable at all.
    std::vector<XComplex> dead(40, XComplex(XReal::parse("1e-31")));
    CHECK_THROWS_AS(fit_r0(synthetic_spectrum(std::move(dead))), qpo::fit_error);
}

TEST_CASE("scaling by the decay radius flattens geometric coefficients") {
    const Spectrum spec = geometric_spectrum(XReal::parse("0.5"), 40);
    const ConjugacySeries series = power_series(spec, XReal::parse("0.5"));
    REQUIRE(series.a.size() == spec.coeffs.size());
    CHECK(series.r0 == XReal::parse("0.5"));
    for (const XComplex& a : series.a) CHECK(a == XComplex(XReal(1)));

    CHECK_THROWS_AS(power_series(spec, XReal(1)), std::invalid_argument);
    CHECK_THROWS_AS(power_series(spec, XReal(0)), std::invalid_argument);
    CHECK_THROWS_AS(power_series(spec, XReal::parse("1.5")), std::invalid_argument);
    CHECK_THROWS_AS(power_series(spec, XReal::parse("-0.5")), std::invalid_argument);
}

TEST_CASE("series coefficients equal spectrum coefficients over r0^k") {
    std::mt19937_64 rng(0x5eedu);
    std::vector<XComplex> coeffs;
    for (int k = 0; k <= 80; ++k)
        coeffs.push_back(XComplex(gen::xreal(rng, -3, 0), gen::xreal(rng, -3, 0)));
    const Spectrum spec = synthetic_spectrum(coeffs);

    const XReal r0 = XReal::parse("0.7");
    const ConjugacySeries series = power_series(spec, r0);
    const Big r0b = Big::from(r0);
    for (std::size_t k = 0; k < series.a.size(); ++k) {
        const BigC want = {Big::from(spec.coeffs[k].re) / pow_int(r0b, static_cast<long>(k)),
                           Big::from(spec.coeffs[k].im) / pow_int(r0b, static_cast<long>(k))};
        CHECK(oracle::rel_err(series.a[k], want) <= 1e-28);
    }
}

TEST_CASE("curve evaluation sums the scaled series") {
    SUBCASE("constant term only") {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        const XComplex c(XReal::parse("0.25"), XReal::parse("-1.5"));
        s.a = {c};
        for (double r : {0.1, 0.5, 0.99})
            for (double th : {0.0, 0.37, 0.93})
                CHECK(evaluate_curve(s, XReal(r), XReal(th)) == c);
    }

    SUBCASE("geometric series against the closed form") {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        s.a.assign(21, XComplex(XReal(1)));  // k = 0..20

        for (const char* rs : {"0.5", "0.25"}) {
            for (const char* ts : {"0", "0.25", "0.8"}) {
                const XReal r = XReal::parse(rs);
                const XReal th = XReal::parse(ts);
                const XComplex got = evaluate_curve(s, r, th);

                // sum_{k=0}^{20} w^k = (1 - w^21) / (1 - w), w = r e^{i2pi th}.
                const BigC w = {Big::from(r) * oracle::exp_i2pi(Big::from(th)).re,
                                Big::from(r) * oracle::exp_i2pi(Big::from(th)).im};
                BigC wp = {Big(1L), Big()};
                for (int k = 0; k < 21; ++k) wp = wp * w;
                const BigC one = {Big(1L), Big()};
                const BigC want = (one - wp) / (one - w);
                CHECK(oracle::abs_err(got, want) <= 1e-30);
            }
        }
    }

    SUBCASE("r to zero collapses onto the constant term") {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        const XComplex a0(XReal(2)), a1(XReal(5)), a2(XReal(7));
        s.a = {a0, a1, a2};
        const XReal r = XReal::parse("1e-20");
        const XComplex got = evaluate_curve(s, r, XReal::parse("0.3"));
        CHECK(abs(got - a0) <= XReal(6) * r);
    }

    SUBCASE("the image circle must stay inside the domain") {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        s.a = {XComplex(XReal(1))};
        CHECK_THROWS_AS(evaluate_curve(s, XReal(1), XReal(0)), std::invalid_argument);
        CHECK_THROWS_AS(evaluate_curve(s, XReal::parse("1.5"), XReal(0)), std::invalid_argument);
    }
}

TEST_CASE("replaying a single-mode spectrum walks the unit circle") {
    Spectrum s = synthetic_spectrum({XComplex(XReal(0)), XComplex(XReal(1))});
    const std::vector<XComplex> z = reconstruct_trajectory(s, 500);
    REQUIRE(z.size() == 500);
    XReal phase(0);
    for (std::size_t n = 0; n < z.size(); ++n) {
        CHECK(abs(z[n] - qpo::exp_i2pi(phase)) <= XReal::parse("1e-32"));
        phase = frac(phase + s.rho);
    }
}

TEST_CASE("mean-square curve length matches the finite closed form") {
    // Constant-modulus coefficients a_k = c for k <= K: length is
    // 2 pi |c| sqrt(sum k^2 r^{2k}), summed at oracle precision.
    const XComplex c(XReal::parse("0.3"), XReal::parse("-0.4"));  // |c| = 0.5
    for (const std::size_t K : {10u, 100u, 1000u}) {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        s.a.assign(K + 1, c);
        for (const char* rs : {"0.3", "0.9", "0.99"}) {
            const XReal r = XReal::parse(rs);
            const XReal got = l2_length_direct(s, r);

            const Big psi = Big::from(r) * Big::from(r);
            Big sum;
            for (std::size_t k = 1; k <= K; ++k)
                sum += Big(static_cast<long>(k)) * Big(static_cast<long>(k)) *
                       pow_int(psi, static_cast<long>(k));
            const Big want = Big(2L) * Big::pi() * Big::from(abs(c)) * sqrt(sum);
            CHECK(oracle::rel_err(got, want) <= 1e-28);
        }
    }
}

TEST_CASE("a pure first mode has the circumference of its circle") {
    ConjugacySeries s;
    s.r0 = XReal::parse("0.9");
    s.a = {XComplex(XReal(0)), XComplex(XReal(1))};
    for (const char* rs : {"0.1", "0.5", "0.97"}) {
        const XReal r = XReal::parse(rs);
        const XReal want = qpo::constants::two_pi() * r;
        CHECK(abs(l2_length_direct(s, r) - want) <= XReal::parse("1e-32"));
    }

    ConjugacySeries flat;
    flat.r0 = XReal::parse("0.9");
    flat.a = {XComplex(XReal(42))};
    CHECK(l2_length_direct(flat, XReal::parse("0.5")) == XReal(0));

    CHECK_THROWS_AS(l2_length_direct(s, XReal(1)), std::invalid_argument);
}

TEST_CASE("curve length grows with the image radius") {
    std::mt19937_64 rng(0x17a9u);
    for (int rep = 0; rep < 10; ++rep) {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        s.a.push_back(XComplex(XReal(0)));
        for (int k = 1; k <= 20; ++k)
            s.a.push_back(XComplex(gen::xreal(rng, -2, 0), gen::xreal(rng, -2, 0)));

        XReal prev(0);
        for (double r = 0.1; r < 1.0; r += 0.1) {
            const XReal len = l2_length_direct(s, XReal(r));
            CHECK(len >= prev);
            prev = len;
        }
    }
}

TEST_CASE("the coefficient-bound length dominates every conforming series") {
    // Frozen-arithmetic example first: c=1, r=0.5.
    const XReal got = l2_length_bound(XReal(1), XReal::parse("0.5"));
    const Big r2(0.25);
    const Big want = Big(2L) * Big::pi() * sqrt(r2 * (Big(1L) + r2) / pow_int(Big(1L) - r2, 3));
    CHECK(oracle::rel_err(got, want) <= 1e-32);

    CHECK(l2_length_bound(XReal(1), XReal(0)) == XReal(0));
    CHECK_THROWS_AS(l2_length_bound(XReal(0), XReal::parse("0.5")), std::invalid_argument);
    CHECK_THROWS_AS(l2_length_bound(XReal(-1), XReal::parse("0.5")), std::invalid_argument);
    CHECK_THROWS_AS(l2_length_bound(XReal(1), XReal(1)), std::invalid_argument);
    CHECK_THROWS_AS(l2_length_bound(XReal(1), XReal::parse("1.2")), std::invalid_argument);

    std::mt19937_64 rng(0xb0b1u);
    const XReal cap = XReal::parse("0.8");
    for (int rep = 0; rep < 10; ++rep) {
        ConjugacySeries s;
        s.r0 = XReal::parse("0.9");
        for (int k = 0; k <= 30; ++k) {
            const XReal mag = cap * XReal(gen::uniform(rng, 0.0, 1.0));
            s.a.push_back(mag * qpo::exp_i2pi(XReal(gen::uniform(rng, 0.0, 1.0))));
        }
        for (const char* rs : {"0.3", "0.7", "0.95"}) {
            const XReal r = XReal::parse(rs);
            CHECK(l2_length_direct(s, r) <= l2_length_bound(cap, r));
        }
    }
}

TEST_CASE("quadratic-map spectra decay exponentially at the documented rates") {
    const qpo::SiegelMapParams p(qpo::constants::golden_mean());

    SUBCASE("innermost documented curve") {
        const qpo::Trajectory t = iterate(p, XComplex(XReal::parse("0.1")), 100000);
        const Spectrum spec = build_spectrum(t.x, p.rho, 80);
        const R0Fit fit = fit_r0(spec);
        CHECK(fit.r0 >= XReal::parse("0.280"));
        CHECK(fit.r0 <= XReal::parse("0.290"));
        CHECK(fit.residual_rms < XReal(1));
        CHECK(fit.slope < XReal(0));
    }

    SUBCASE("second curve, with its tail at the noise floor") {
        const qpo::Trajectory t = iterate(p, XComplex(XReal::parse("0.2")), 100000);
        SpectrumOptions keep_all;
        keep_all.early_stop = false;
        const Spectrum spec = build_spectrum(t.x, p.rho, 135, keep_all);
        REQUIRE(spec.coeffs.size() == 136);

        const R0Fit fit = fit_r0(spec);
        CHECK(fit.r0 >= XReal::parse("0.565"));
        CHECK(fit.r0 <= XReal::parse("0.575"));
        CHECK(fit.residual_rms < XReal(1));

        // Far beyond the decay knee the estimates sit at the averaging
        // noise level, below the recorded floor.
        for (std::size_t k = 128; k < spec.coeffs.size(); ++k)
            CHECK(abs(spec.coeffs[k]) <= spec.noise_floor);
    }
}
