// Command-line driver for quasiperiodic-orbit analysis: orbit generation,
// rotation-rate estimation, Fourier spectra, conjugacy fitting, and
// plot-ready table emission.  Every numeric flag parses at full 36-digit
// precision, the named constants `golden` and `sqrt3half` are computed
// internally rather than read from decimal literals, and identical
// configurations produce byte-identical artifacts.
//
// Exit codes: 0 success, 2 usage / input-plumbing error, 3 numeric or
// domain failure (escaped orbit, missing lift, degenerate projection,
// failed fit).

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpo/io.hpp"
#include "qpo/maps.hpp"
#include "qpo/projection.hpp"
#include "qpo/spectrum.hpp"
#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"

namespace {

using qpo::Trajectory;
using qpo::WeightKind;
using qpo::XComplex;
using qpo::XReal;

using ConfigItems = std::vector<std::pair<std::string, std::string>>;

// Jobs whose mode-sample product exceeds this need an explicit --full-scale.
constexpr std::size_t kDeskScaleModeSamples = 1'000'000'000;

XReal parse_real(const std::string& text) {
    if (text == "golden") return qpo::constants::golden_mean();
    if (text == "sqrt3half") return qpo::constants::sqrt3_half();
    if (text == "pi") return qpo::constants::pi();
    return XReal::parse(text);
}

// Accepts "a", "bi", "a+bi", "a-bi"; bare "i", "+i", "-i" mean the unit
// imaginary.  Exponents inside components ("1e-5i") are handled.
XComplex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') return XComplex(parse_real(s));
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t j = s.size(); j-- > 1;) {
        if ((s[j] == '+' || s[j] == '-') && s[j - 1] != 'e' && s[j - 1] != 'E') {
            split = j;
            break;
        }
    }
    std::string re_part = "0";
    std::string im_part = s;
    if (split != std::string::npos) {
        re_part = s.substr(0, split);
        im_part = s.substr(split);
    }
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    return {XReal::parse(re_part), XReal::parse(im_part)};
}

// Distance between two rates on the unit circle, in turns.
XReal circular_error(const XReal& a, const XReal& b) {
    XReal d = qpo::frac(a - b);
    XReal alt = XReal(1) - d;
    return d < alt ? d : alt;
}

std::string fnv1a64_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::string canonical_config(const std::string& command, const ConfigItems& items) {
    std::string text = "command=" + command;
    for (const auto& [key, value] : items) text += "\n" + key + "=" + value;
    return text;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text += ',';
        text += std::to_string(values[i]);
    }
    return text;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw qpo::io_error("cannot open for writing: " + path.string());
    return out;
}

void write_table_header(std::ostream& out, const std::string& label, const std::string& canon) {
    out << "# label=" << label << '\n';
    std::istringstream lines(canon);
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << "# config_hash=" << fnv1a64_hex(canon) << '\n';
}

// Prepends the label/config header to an artifact one of the library
// writers produced; the readers skip unrecognized '# key=value' lines.
void stamp_artifact(const std::filesystem::path& path, const std::string& label,
                    const std::string& canon) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qpo::io_error("cannot reopen artifact: " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    in.close();
    auto out = open_out(path);
    write_table_header(out, label, canon);
    out << body.str();
    if (!out) throw qpo::io_error("write failed: " + path.string());
}

// Decades 100, 1000, ... below n, then n itself.
std::vector<std::size_t> default_checkpoints(std::size_t n) {
    std::vector<std::size_t> cps;
    for (std::size_t c = 100; c < n; c *= 10) cps.push_back(c);
    if (n >= 2) cps.push_back(n);
    return cps;
}

std::span<const XComplex> pick_component(const Trajectory& traj, int component) {
    if (component == 0) return traj.x;
    if (component == 1 && traj.dim() == 2) return traj.y;
    throw std::invalid_argument("component must be 0, or 1 when the trajectory has two");
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string map;
    std::string preset;
    std::string rho;
    std::string z0;
    std::string theta;
    std::string phi;
    std::string x0;
    std::string y0;
    std::string out;
    std::size_t n = 0;
    std::size_t stride = 1;
};

int run_simulate(const SimulateArgs& a) {
    std::string map = a.map;
    XReal rho, theta, phi;
    XComplex z0, x0, y0;
    if (!a.preset.empty()) {
        map = "henon";
        if (a.preset == "2a") {
            // Two incommensurate rotation rates rho1, rho2 realized as
            // theta = pi (rho1 + rho2), phi = pi (rho1 - rho2); the start
            // point sits on the linearized eigenplanes at amplitudes
            // 3e-4 and 8e-4.
            XReal rho1 = qpo::constants::golden_mean();
            XReal rho2 = qpo::constants::sqrt3_half();
            theta = qpo::constants::pi() * (rho1 + rho2);
            phi = qpo::constants::pi() * (rho1 - rho2);
            qpo::HenonParams params(theta, phi);
            auto fp = qpo::henon_fixed_point(params);
            auto eig = qpo::henon_eigenvalues(params);
            XReal amp1(0.0003), amp2(0.0008);
            x0 = fp.first + XComplex(amp1 + amp2);
            y0 = fp.second + amp1 * eig.first + amp2 * eig.second;
        } else {
            theta = XReal::parse("0.664");
            phi = XReal::parse("2.032");
            x0 = {XReal::parse("-0.5"), XReal::parse("0.126")};
            y0 = {XReal::parse("-0.387"), XReal::parse("-0.163")};
        }
    } else if (map == "henon") {
        if (a.theta.empty() || a.phi.empty() || a.x0.empty() || a.y0.empty())
            throw std::invalid_argument("simulate: --map henon needs --theta, --phi, --x0, --y0");
        theta = parse_real(a.theta);
        phi = parse_real(a.phi);
        x0 = parse_complex(a.x0);
        y0 = parse_complex(a.y0);
    } else if (map == "siegel") {
        if (a.rho.empty() || a.z0.empty())
            throw std::invalid_argument("simulate: --map siegel needs --rho and --z0");
        rho = parse_real(a.rho);
        z0 = parse_complex(a.z0);
    } else {
        throw std::invalid_argument("simulate: pass --map siegel|henon or --preset 2a|2b");
    }

    Trajectory traj;
    if (map == "siegel") {
        qpo::SiegelMapParams params(rho);
        traj = qpo::iterate(params, z0, a.n, a.stride);
    } else {
        qpo::HenonParams params(theta, phi);
        traj = qpo::iterate(params, x0, y0, a.n, a.stride);
    }
    qpo::write_trajectory_csv(a.out, traj);

    ConfigItems items;
    items.emplace_back("generator", map);
    for (const auto& [key, value] : traj.meta.params) items.emplace_back(key, value);
    items.emplace_back("n", std::to_string(a.n));
    items.emplace_back("stride", std::to_string(a.stride));
    items.emplace_back("out", a.out);
    std::string canon = canonical_config("simulate", items);

    std::cout << "generator   = " << map << '\n'
              << "points      = " << traj.size() << " (stride " << a.stride << ")\n"
              << "wrote " << a.out << " and " << a.out << ".meta\n"
              << "config_hash = " << fnv1a64_hex(canon) << '\n';
    return 0;
}

// ---------------------------------------------------------------- rotation

struct RotationArgs {
    std::string in;
    std::string projection = "planar";
    std::string ref_u = "0";
    std::string ref_v = "0";
    std::string radius_u = "0";
    std::string radius_v = "0";
    std::string weight = "bump2";
    std::string reference;
    std::string profile_out;
    std::string lift_out;
    std::string label = "rotation";
    int component = 0;
    std::size_t lag = 1;
    std::vector<std::size_t> checkpoints;
};

int run_rotation(const RotationArgs& a) {
    Trajectory traj = qpo::read_trajectory_csv(a.in);

    qpo::ProjectionSpec spec;
    spec.ref_u = parse_real(a.ref_u);
    spec.ref_v = parse_real(a.ref_v);
    if (a.projection == "planar") {
        spec.kind = qpo::PlanarProjection{a.component};
    } else if (a.projection == "radius-delay") {
        qpo::RadiusDelayProjection rd;
        rd.component = a.component;
        rd.lag = a.lag;
        rd.radius_u = parse_real(a.radius_u);
        rd.radius_v = parse_real(a.radius_v);
        spec.kind = rd;
    } else {
        throw std::invalid_argument("rotation: --projection must be planar or radius-delay");
    }
    WeightKind kind = WeightKind::from_name(a.weight);

    bool have_ref = !a.reference.empty();
    XReal ref;
    if (have_ref) ref = qpo::frac(parse_real(a.reference));

    std::vector<std::size_t> cps = a.checkpoints;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.empty() && (have_ref || !a.profile_out.empty())) {
        std::size_t n_angles = traj.size();
        if (const auto* rd = std::get_if<qpo::RadiusDelayProjection>(&spec.kind))
            n_angles = traj.size() > rd->lag ? traj.size() - rd->lag : 0;
        if (n_angles >= 3) cps = default_checkpoints(n_angles - 1);
    }

    qpo::RotationEstimate est = qpo::rotation_rate(traj, spec, kind, cps);

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("projection", a.projection);
    items.emplace_back("component", std::to_string(a.component));
    items.emplace_back("ref_u", spec.ref_u.str());
    items.emplace_back("ref_v", spec.ref_v.str());
    if (const auto* rd = std::get_if<qpo::RadiusDelayProjection>(&spec.kind)) {
        items.emplace_back("lag", std::to_string(rd->lag));
        items.emplace_back("radius_u", rd->radius_u.str());
        items.emplace_back("radius_v", rd->radius_v.str());
    }
    items.emplace_back("weight", kind.name());
    if (have_ref) items.emplace_back("reference", ref.str());
    if (!cps.empty()) items.emplace_back("checkpoints", join_sizes(cps));
    std::string canon = canonical_config("rotation", items);

    std::cout << "points           = " << est.n_points << '\n'
              << "differences      = " << est.n_deltas << '\n'
              << "weight           = " << est.kind.name() << '\n'
              << "branch_center    = " << est.branch_center.str() << '\n'
              << "branch_halfwidth = " << est.branch_halfwidth.str() << '\n'
              << "rate_unit        = " << est.rate.str() << '\n'
              << "rate_half_turn   = " << qpo::half_turn_representative(est.rate).str() << '\n';
    if (have_ref)
        std::cout << "reference        = " << ref.str() << '\n'
                  << "err              = " << circular_error(est.rate, ref).str() << '\n';
    std::cout << "config_hash      = " << fnv1a64_hex(canon) << '\n';

    auto write_profile = [&](std::ostream& out) {
        out << (have_ref ? "n,rate,err\n" : "n,rate\n");
        for (const auto& [n, rate] : est.profile) {
            out << n << ',' << rate.str();
            if (have_ref) out << ',' << circular_error(rate, ref).str();
            out << '\n';
        }
    };
    if (!est.profile.empty()) write_profile(std::cout);
    if (!a.profile_out.empty()) {
        auto out = open_out(a.profile_out);
        write_table_header(out, a.label, canon);
        write_profile(out);
        if (!out) throw qpo::io_error("write failed: " + a.profile_out);
    }
    if (!a.lift_out.empty()) {
        auto angles = qpo::project_to_angles(traj, spec);
        auto lifted = qpo::lift_angle_differences(angles);
        auto out = open_out(a.lift_out);
        write_table_header(out, a.label, canon);
        out << "n,delta\n";
        for (std::size_t i = 0; i < lifted.deltas.size(); ++i)
            out << i << ',' << lifted.deltas[i].str() << '\n';
        if (!out) throw qpo::io_error("write failed: " + a.lift_out);
    }
    return 0;
}

// ----------------------------------------------------------------- fourier

struct FourierArgs {
    std::string in;
    std::string rho;
    std::string weight = "bump2";
    std::string noise_floor;
    std::string out;
    std::string label = "spectrum";
    int component = 0;
    std::size_t kmax = 0;
    unsigned threads = 0;
    bool no_early_stop = false;
    bool full_scale = false;
};

int run_fourier(const FourierArgs& a) {
    Trajectory traj = qpo::read_trajectory_csv(a.in);
    auto samples = pick_component(traj, a.component);

    const std::size_t cost = (a.kmax + 1) * samples.size();
    if (cost > kDeskScaleModeSamples && !a.full_scale)
        throw std::invalid_argument(
            "fourier: (k_max+1)*n_samples = " + std::to_string(cost) +
            " exceeds the desk-scale budget of " + std::to_string(kDeskScaleModeSamples) +
            "; pass --full-scale to run long jobs");

    XReal rho = parse_real(a.rho);
    qpo::SpectrumOptions opts;
    opts.kind = WeightKind::from_name(a.weight);
    if (!a.noise_floor.empty()) opts.noise_floor = parse_real(a.noise_floor);
    opts.early_stop = !a.no_early_stop;
    opts.threads = a.threads;

    qpo::Spectrum spec = qpo::build_spectrum(samples, rho, a.kmax, opts);

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("component", std::to_string(a.component));
    items.emplace_back("rho", rho.str());
    items.emplace_back("kmax", std::to_string(a.kmax));
    items.emplace_back("weight", opts.kind.name());
    items.emplace_back("noise_floor", opts.noise_floor.str());
    items.emplace_back("early_stop", opts.early_stop ? "true" : "false");
    items.emplace_back("out", a.out);
    std::string canon = canonical_config("fourier", items);

    qpo::write_spectrum(a.out, spec);
    stamp_artifact(a.out, a.label, canon);

    XReal peak(0);
    for (const auto& c : spec.coeffs) {
        XReal m = qpo::abs(c);
        if (m > peak) peak = m;
    }
    std::cout << "samples     = " << spec.n_samples << '\n'
              << "modes       = " << spec.coeffs.size() << " (k_max requested " << a.kmax << ")\n"
              << "peak        = " << peak.str() << '\n'
              << "wrote " << a.out << '\n'
              << "config_hash = " << fnv1a64_hex(canon) << '\n';
    return 0;
}

// --------------------------------------------------------------- conjugacy

struct ConjugacyArgs {
    std::string in;
    std::string out;
    std::string r0_override;
    std::string replay;
    std::string label = "conjugacy";
    int component = 0;
    std::size_t replay_points = 1000;
};

int run_conjugacy(const ConjugacyArgs& a) {
    qpo::Spectrum spec = qpo::read_spectrum(a.in);
    qpo::R0Fit fit = qpo::fit_r0(spec);

    XReal r0 = fit.r0;
    bool overridden = !a.r0_override.empty();
    if (overridden) r0 = parse_real(a.r0_override);
    else if (!(r0 > XReal(0) && r0 < XReal(1)))
        throw std::domain_error("conjugacy: fitted r0 = " + r0.str() + " lies outside (0, 1)");

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("r0", r0.str());
    if (!a.out.empty()) items.emplace_back("out", a.out);
    if (!a.replay.empty()) {
        items.emplace_back("replay", a.replay);
        items.emplace_back("component", std::to_string(a.component));
        items.emplace_back("replay_points", std::to_string(a.replay_points));
    }
    std::string canon = canonical_config("conjugacy", items);

    std::cout << "modes          = " << spec.coeffs.size() << '\n'
              << "fit_window     = [" << fit.k_first << ", " << fit.k_last << "] ("
              << fit.n_points << " modes)\n"
              << "r0             = " << fit.r0.str() << '\n'
              << "slope          = " << fit.slope.str() << '\n'
              << "residual_rms   = " << fit.residual_rms.str() << '\n';
    if (overridden) std::cout << "series_r0      = " << r0.str() << " (override)\n";

    if (!a.out.empty()) {
        qpo::ConjugacySeries series = qpo::power_series(spec, r0);
        qpo::write_series(a.out, series);
        stamp_artifact(a.out, a.label, canon);
        std::cout << "wrote " << a.out << '\n';
    }
    if (!a.replay.empty()) {
        Trajectory traj = qpo::read_trajectory_csv(a.replay);
        auto samples = pick_component(traj, a.component);
        std::size_t m = std::min(a.replay_points, samples.size());
        if (m == 0) throw std::invalid_argument("conjugacy: replay trajectory is empty");
        auto recon = qpo::reconstruct_trajectory(spec, m);
        XReal max_err(0);
        for (std::size_t i = 0; i < m; ++i) {
            XReal e = qpo::abs(recon[i] - samples[i]);
            if (e > max_err) max_err = e;
        }
        std::cout << "replay_points  = " << m << '\n'
                  << "replay_max_err = " << max_err.str() << '\n';
    }
    std::cout << "config_hash    = " << fnv1a64_hex(canon) << '\n';
    return 0;
}

// ------------------------------------------------------------------- curve

struct CurveArgs {
    std::string in;
    std::string r;
    std::string out;
    std::string label = "curve";
    std::size_t samples = 1024;
};

int run_curve(const CurveArgs& a) {
    qpo::ConjugacySeries series = qpo::read_series(a.in);
    XReal r = parse_real(a.r);

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("r", r.str());
    items.emplace_back("samples", std::to_string(a.samples));
    items.emplace_back("out", a.out);
    std::string canon = canonical_config("curve", items);

    auto out = open_out(a.out);
    write_table_header(out, a.label, canon);
    out << "theta,re,im\n";
    XReal m(static_cast<long long>(a.samples));
    for (std::size_t j = 0; j < a.samples; ++j) {
        XReal theta = XReal(static_cast<long long>(j)) / m;
        XComplex z = qpo::evaluate_curve(series, r, theta);
        out << theta.str() << ',' << z.re.str() << ',' << z.im.str() << '\n';
    }
    if (!out) throw qpo::io_error("write failed: " + a.out);

    std::cout << "samples     = " << a.samples << " at r = " << r.str() << '\n'
              << "wrote " << a.out << '\n'
              << "config_hash = " << fnv1a64_hex(canon) << '\n';
    return 0;
}

// ------------------------------------------------------------------ length

struct LengthArgs {
    std::string in;
    std::string r;
    std::string bound_coeff;
    std::string out;
    std::string label = "length";
    std::size_t steps = 50;
};

int run_length(const LengthArgs& a) {
    qpo::ConjugacySeries series = qpo::read_series(a.in);

    XReal lo, hi;
    auto pos = a.r.find("..");
    if (pos == std::string::npos) {
        lo = hi = parse_real(a.r);
    } else {
        lo = parse_real(a.r.substr(0, pos));
        hi = parse_real(a.r.substr(pos + 2));
    }
    if (hi < lo) throw std::invalid_argument("length: radius range is reversed");
    std::size_t steps = (lo == hi) ? 1 : a.steps;
    if (steps < 2 && lo != hi)
        throw std::invalid_argument("length: --steps must be >= 2 for a radius range");

    bool with_bound = !a.bound_coeff.empty();
    XReal c = with_bound ? parse_real(a.bound_coeff) : XReal(0);

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("r_lo", lo.str());
    items.emplace_back("r_hi", hi.str());
    items.emplace_back("steps", std::to_string(steps));
    if (with_bound) items.emplace_back("bound_coeff", c.str());
    items.emplace_back("out", a.out);
    std::string canon = canonical_config("length", items);

    auto out = open_out(a.out);
    write_table_header(out, a.label, canon);
    out << (with_bound ? "r,length,bound\n" : "r,length\n");
    XReal first_len, last_len;
    for (std::size_t i = 0; i < steps; ++i) {
        XReal r = (steps == 1)
                      ? lo
                      : lo + (hi - lo) * XReal(static_cast<long long>(i)) /
                                 XReal(static_cast<long long>(steps - 1));
        XReal len = qpo::l2_length_direct(series, r);
        out << r.str() << ',' << len.str();
        if (with_bound) out << ',' << qpo::l2_length_bound(c, r).str();
        out << '\n';
        if (i == 0) first_len = len;
        last_len = len;
    }
    if (!out) throw qpo::io_error("write failed: " + a.out);

    std::cout << "rows        = " << steps << '\n'
              << "length_lo   = " << first_len.str() << '\n'
              << "length_hi   = " << last_len.str() << '\n'
              << "wrote " << a.out << '\n'
              << "config_hash = " << fnv1a64_hex(canon) << '\n';
    return 0;
}

// ------------------------------------------------------------- convergence

struct ConvergenceArgs {
    std::string in;
    std::string rho = "0";
    std::string reference;
    std::string out;
    std::string label = "convergence";
    int component = 0;
    long mode = 0;
    std::vector<std::string> weights = {"bump2"};
    std::vector<std::size_t> checkpoints;
};

int run_convergence(const ConvergenceArgs& a) {
    Trajectory traj = qpo::read_trajectory_csv(a.in);
    auto samples = pick_component(traj, a.component);
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("convergence: need at least 2 samples");

    XReal rho = parse_real(a.rho);
    XReal mode(static_cast<long long>(a.mode));

    std::vector<std::size_t> cps = a.checkpoints;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    for (std::size_t c : cps)
        if (c < 2 || c > n)
            throw std::invalid_argument("convergence: checkpoints must lie in [2, n_samples]");
    if (cps.empty()) cps = default_checkpoints(n);

    bool have_ref = !a.reference.empty();
    XComplex ref;
    if (have_ref) ref = parse_complex(a.reference);
    else if (cps.back() != n) cps.push_back(n);

    std::vector<WeightKind> kinds;
    for (const auto& name : a.weights) kinds.push_back(WeightKind::from_name(name));
    if (kinds.empty()) throw std::invalid_argument("convergence: no weights requested");

    auto sample_at = [&](std::size_t i) {
        if (a.mode == 0) return samples[i];
        return samples[i] * qpo::exp_i2pi(-(mode * XReal(static_cast<long long>(i)) * rho));
    };

    struct Column {
        WeightKind kind;
        std::vector<std::pair<std::size_t, XComplex>> profile;
        XComplex ref;
    };
    std::vector<Column> cols;
    for (const auto& kind : kinds) {
        auto profile = qpo::convergence_profile(sample_at, kind, cps);
        XComplex column_ref = have_ref ? ref : profile.back().second;
        cols.push_back({kind, std::move(profile), column_ref});
    }

    ConfigItems items;
    items.emplace_back("in", a.in);
    items.emplace_back("component", std::to_string(a.component));
    items.emplace_back("mode", std::to_string(a.mode));
    items.emplace_back("rho", rho.str());
    {
        std::string names;
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            if (i) names += ',';
            names += kinds[i].name();
        }
        items.emplace_back("weights", names);
    }
    items.emplace_back("checkpoints", join_sizes(cps));
    if (have_ref)
        items.emplace_back("reference", cols.front().ref.re.str() + " " + cols.front().ref.im.str());
    if (!a.out.empty()) items.emplace_back("out", a.out);
    std::string canon = canonical_config("convergence", items);

    for (const auto& col : cols) {
        std::cout << "weight " << col.kind.name() << " (reference re = " << col.ref.re.str()
                  << ", im = " << col.ref.im.str() << ")\n";
        std::cout << "n,re,im,err\n";
        for (const auto& [cp, est] : col.profile)
            std::cout << cp << ',' << est.re.str() << ',' << est.im.str() << ','
                      << qpo::abs(est - col.ref).str() << '\n';
    }
    std::cout << "config_hash = " << fnv1a64_hex(canon) << '\n';

    if (!a.out.empty()) {
        auto out = open_out(a.out);
        write_table_header(out, a.label, canon);
        out << "n";
        for (const auto& col : cols)
            out << ',' << col.kind.name() << "_re," << col.kind.name() << "_im,"
                << col.kind.name() << "_err";
        out << '\n';
        for (std::size_t row = 0; row < cps.size(); ++row) {
            out << cps[row];
            for (const auto& col : cols) {
                const auto& [cp, est] = col.profile[row];
                out << ',' << est.re.str() << ',' << est.im.str() << ','
                    << qpo::abs(est - col.ref).str();
            }
            out << '\n';
        }
        if (!out) throw qpo::io_error("write failed: " + a.out);
    }
    return 0;
}

int print_config(const CLI::App& app) {
    std::cout << app.config_to_str(false, false);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "quasiperiodic-orbit toolkit: iterate holomorphic maps, estimate rotation\n"
        "rates via weighted time averages, extract Fourier spectra, and fit the\n"
        "conjugacy to a rigid rotation"};
    app.require_subcommand(1);
    app.footer(
        "examples:\n"
        "  qpo simulate --map siegel --rho golden --z0 0.37 --n 100000 --out orbit.csv\n"
        "  qpo rotation --in orbit.csv --reference golden --checkpoints 1000,10000\n"
        "  qpo fourier --in orbit.csv --rho golden --kmax 80 --out spec.csv\n"
        "  qpo conjugacy --in spec.csv --out series.csv --replay orbit.csv\n"
        "  qpo curve --in series.csv --r 0.95 --samples 2048 --out curve.csv\n"
        "  qpo length --in series.csv --r 0.5..0.99 --steps 40 --out length.csv\n"
        "  qpo convergence --in orbit.csv --weights uniform,bump2 --out conv.csv");

    app.set_config("--config", "",
                   "Read options from a TOML/INI file with a [command] section; "
                   "command-line flags override it")
        ->configurable(false);

    auto configure = [](CLI::App* cmd, bool& print_flag) {
        cmd->configurable();
        cmd->fallthrough();
        cmd->add_flag("--print-config", print_flag,
                      "Print the resolved configuration and exit")
            ->configurable(false);
    };

    SimulateArgs sim;
    bool sim_print = false;
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Iterate a map and write a trajectory CSV plus .meta sidecar");
    configure(sim_cmd, sim_print);
    auto* map_opt = sim_cmd->add_option("--map", sim.map, "Generator: siegel or henon")
                        ->check(CLI::IsMember({"siegel", "henon"}));
    auto* rho_opt = sim_cmd->add_option(
        "--rho", sim.rho, "Rotation number in turns (accepts golden, sqrt3half)");
    auto* z0_opt = sim_cmd->add_option("--z0", sim.z0, "Start point, e.g. 0.37 or -0.1+0.2i");
    auto* theta_opt = sim_cmd->add_option("--theta", sim.theta, "Rotation angle theta (radians)");
    auto* phi_opt = sim_cmd->add_option("--phi", sim.phi, "Rotation angle phi (radians)");
    auto* x0_opt = sim_cmd->add_option("--x0", sim.x0, "First start coordinate, e.g. -0.5+0.126i");
    auto* y0_opt = sim_cmd->add_option("--y0", sim.y0, "Second start coordinate");
    sim_cmd->add_option("--preset", sim.preset,
                        "Named parameter set: 2a (golden/sqrt3half pair) or 2b")
        ->check(CLI::IsMember({"2a", "2b"}))
        ->excludes(map_opt)
        ->excludes(rho_opt)
        ->excludes(z0_opt)
        ->excludes(theta_opt)
        ->excludes(phi_opt)
        ->excludes(x0_opt)
        ->excludes(y0_opt);
    sim_cmd->add_option("--n", sim.n, "Points to record")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--stride", sim.stride, "Record every stride-th iterate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--out", sim.out, "Trajectory CSV path")->required();

    RotationArgs rot;
    bool rot_print = false;
    auto* rot_cmd = app.add_subcommand(
        "rotation", "Estimate the rotation rate of a recorded orbit under a circle projection");
    configure(rot_cmd, rot_print);
    rot_cmd->add_option("--in", rot.in, "Trajectory CSV")->required();
    rot_cmd->add_option("--projection", rot.projection, "planar or radius-delay")
        ->capture_default_str()
        ->check(CLI::IsMember({"planar", "radius-delay"}));
    rot_cmd->add_option("--component", rot.component, "Coordinate to project (0 or 1)")
        ->capture_default_str();
    rot_cmd->add_option("--lag", rot.lag, "Delay lag for radius-delay")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rot_cmd->add_option("--ref-u", rot.ref_u, "Angle reference, first coordinate")
        ->capture_default_str();
    rot_cmd->add_option("--ref-v", rot.ref_v, "Angle reference, second coordinate")
        ->capture_default_str();
    rot_cmd->add_option("--radius-u", rot.radius_u,
                        "Radius-delay distance center, first coordinate")
        ->capture_default_str();
    rot_cmd->add_option("--radius-v", rot.radius_v,
                        "Radius-delay distance center, second coordinate")
        ->capture_default_str();
    rot_cmd->add_option("--weight", rot.weight, "Averaging window: uniform, bump<p>, iterated")
        ->capture_default_str();
    rot_cmd->add_option("--reference", rot.reference,
                        "Known rate in turns; adds an err column to the profile");
    rot_cmd->add_option("--checkpoints", rot.checkpoints,
                        "Comma-separated difference counts for the convergence profile")
        ->delimiter(',');
    rot_cmd->add_option("--profile-out", rot.profile_out, "Write the profile as CSV");
    rot_cmd->add_option("--lift-out", rot.lift_out, "Write the lifted angle differences as CSV");
    rot_cmd->add_option("--label", rot.label, "Header label for emitted CSV tables")
        ->capture_default_str();

    FourierArgs fou;
    bool fou_print = false;
    auto* fou_cmd = app.add_subcommand(
        "fourier", "Extract weighted Fourier coefficients of an orbit along a known rate");
    configure(fou_cmd, fou_print);
    fou_cmd->add_option("--in", fou.in, "Trajectory CSV")->required();
    fou_cmd->add_option("--component", fou.component, "Coordinate to analyze (0 or 1)")
        ->capture_default_str();
    fou_cmd->add_option("--rho", fou.rho, "Rotation rate in turns (accepts golden, sqrt3half)")
        ->required();
    fou_cmd->add_option("--kmax", fou.kmax, "Largest mode index")
        ->required()
        ->check(CLI::PositiveNumber);
    fou_cmd->add_option("--weight", fou.weight, "Averaging window: uniform, bump<p>, iterated")
        ->capture_default_str();
    fou_cmd->add_option("--noise-floor", fou.noise_floor,
                        "Magnitude below which modes count as noise");
    fou_cmd->add_flag("--no-early-stop", fou.no_early_stop,
                      "Keep computing modes after 50 consecutive fall below the floor");
    fou_cmd->add_option("--threads", fou.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    fou_cmd->add_flag("--full-scale", fou.full_scale,
                      "Allow jobs beyond the desk-scale budget (may run for an hour)");
    fou_cmd->add_option("--out", fou.out, "Spectrum CSV path")->required();
    fou_cmd->add_option("--label", fou.label, "Header label for the artifact")
        ->capture_default_str();

    ConjugacyArgs con;
    bool con_print = false;
    auto* con_cmd = app.add_subcommand(
        "conjugacy", "Fit the spectrum decay rate and emit the scaled conjugacy series");
    configure(con_cmd, con_print);
    con_cmd->add_option("--in", con.in, "Spectrum CSV")->required();
    con_cmd->add_option("--out", con.out, "Series CSV path");
    con_cmd->add_option("--r0", con.r0_override,
                        "Override the fitted scale when building the series");
    con_cmd->add_option("--replay", con.replay,
                        "Trajectory CSV to reconstruct and compare against");
    con_cmd->add_option("--replay-points", con.replay_points, "Points to replay")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    con_cmd->add_option("--component", con.component, "Replay coordinate (0 or 1)")
        ->capture_default_str();
    con_cmd->add_option("--label", con.label, "Header label for the artifact")
        ->capture_default_str();

    CurveArgs cur;
    bool cur_print = false;
    auto* cur_cmd = app.add_subcommand(
        "curve", "Sample the conjugacy on the circle of radius r and write theta,re,im rows");
    configure(cur_cmd, cur_print);
    cur_cmd->add_option("--in", cur.in, "Series CSV")->required();
    cur_cmd->add_option("--r", cur.r, "Radius in [0, 1)")->required();
    cur_cmd->add_option("--samples", cur.samples, "Points around the circle")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cur_cmd->add_option("--out", cur.out, "Curve CSV path")->required();
    cur_cmd->add_option("--label", cur.label, "Header label for the table")
        ->capture_default_str();

    LengthArgs len;
    bool len_print = false;
    auto* len_cmd = app.add_subcommand(
        "length", "Tabulate the L2 curve length over a radius sweep");
    configure(len_cmd, len_print);
    len_cmd->add_option("--in", len.in, "Series CSV")->required();
    len_cmd->add_option("--r", len.r, "Radius or range lo..hi, each in [0, 1)")->required();
    len_cmd->add_option("--steps", len.steps, "Rows across the range")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    len_cmd->add_option("--bound-coeff", len.bound_coeff,
                        "Also emit the geometric-envelope length bound for this coefficient size");
    len_cmd->add_option("--out", len.out, "Length CSV path")->required();
    len_cmd->add_option("--label", len.label, "Header label for the table")
        ->capture_default_str();

    ConvergenceArgs cvg;
    bool cvg_print = false;
    auto* cvg_cmd = app.add_subcommand(
        "convergence", "Tabulate weighted-average convergence of an orbit observable");
    configure(cvg_cmd, cvg_print);
    cvg_cmd->add_option("--in", cvg.in, "Trajectory CSV")->required();
    cvg_cmd->add_option("--component", cvg.component, "Coordinate to average (0 or 1)")
        ->capture_default_str();
    cvg_cmd->add_option("--mode", cvg.mode, "Fourier mode of the observable (0 = plain mean)")
        ->capture_default_str();
    cvg_cmd->add_option("--rho", cvg.rho, "Rotation rate in turns; needed when mode != 0")
        ->capture_default_str();
    cvg_cmd->add_option("--weights", cvg.weights,
                        "Comma-separated windows to compare: uniform, bump<p>, iterated")
        ->delimiter(',');
    cvg_cmd->add_option("--checkpoints", cvg.checkpoints,
                        "Comma-separated sample counts (default: decades up to n)")
        ->delimiter(',');
    cvg_cmd->add_option("--reference", cvg.reference,
                        "Exact limit as a complex literal; default is the full-length estimate");
    cvg_cmd->add_option("--out", cvg.out, "Convergence CSV path");
    cvg_cmd->add_option("--label", cvg.label, "Header label for the table")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) return sim_print ? print_config(app) : run_simulate(sim);
        if (rot_cmd->parsed()) return rot_print ? print_config(app) : run_rotation(rot);
        if (fou_cmd->parsed()) return fou_print ? print_config(app) : run_fourier(fou);
        if (con_cmd->parsed()) return con_print ? print_config(app) : run_conjugacy(con);
        if (cur_cmd->parsed()) return cur_print ? print_config(app) : run_curve(cur);
        if (len_cmd->parsed()) return len_print ? print_config(app) : run_length(len);
        if (cvg_cmd->parsed()) return cvg_print ? print_config(app) : run_convergence(cvg);
    } catch (const qpo::no_lift_error& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "branch_halfwidth = " << e.branch_halfwidth().str() << '\n';
        return 3;
    } catch (const qpo::degenerate_projection_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qpo::escaped_orbit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qpo::fit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qpo::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
