#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qpo/io.hpp"
#include "qpo/maps.hpp"
#include "qpo/spectrum.hpp"
#include "qpo/xreal.hpp"

using qpo::ConjugacySeries;
using qpo::Spectrum;
using qpo::Trajectory;
using qpo::WeightKind;
using qpo::XComplex;
using qpo::XReal;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case, removed on destruction.
struct Scratch {
    fs::path dir;

    explicit Scratch(const std::string& tag)
        : dir(fs::temp_directory_path() / ("qpo_io_" + tag)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

Spectrum sample_spectrum() {
    Spectrum s;
    s.rho = qpo::constants::golden_mean();
    s.kind = WeightKind::iterated_bump();
    s.n_samples = 12345;
    s.noise_floor = XReal::parse("1e-30");
    XReal v = XReal::parse("0.123456789012345678901234567890123456");
    for (int k = 0; k < 20; ++k) {
        s.coeffs.push_back({v, -v * v});
        v = v * XReal::parse("0.61");
    }
    return s;
}

}  // namespace

TEST_CASE("one-dimensional trajectories survive the disk unchanged") {
    Scratch tmp("traj1");
    const qpo::SiegelMapParams p(qpo::constants::golden_mean());
    const Trajectory t = iterate(p, XComplex(XReal::parse("0.2"), XReal::parse("0.01")), 50);

    const fs::path file = tmp / "orbit.csv";
    write_trajectory_csv(file, t);
    REQUIRE(fs::exists(file));
    REQUIRE(fs::exists(tmp / "orbit.csv.meta"));

    const Trajectory back = qpo::read_trajectory_csv(file);
    REQUIRE(back.size() == t.size());
    CHECK(back.dim() == 1);
    for (std::size_t n = 0; n < t.size(); ++n) CHECK(back.x[n] == t.x[n]);

    CHECK(back.meta.generator == "siegel");
    CHECK(back.meta.n_requested == 50);
    CHECK(back.meta.stride == 1);
    CHECK(back.meta.transient_discard == 0);
    REQUIRE(back.meta.params.size() == 2);
    CHECK(back.meta.params[0].first == "rho");
    CHECK(XReal::parse(back.meta.params[0].second) == p.rho);

    // Writing the read-back copy reproduces both files byte for byte.
    const fs::path file2 = tmp / "orbit2.csv";
    write_trajectory_csv(file2, back);
    CHECK(slurp(file2) == slurp(file));
    CHECK(slurp(tmp / "orbit2.csv.meta") == slurp(tmp / "orbit.csv.meta"));
}

TEST_CASE("two-dimensional trajectories keep both coordinates and the stride") {
    Scratch tmp("traj2");
    const qpo::HenonParams p(XReal::parse("0.664"), XReal::parse("2.032"));
    const Trajectory t = iterate(p, XComplex(XReal::parse("-0.500"), XReal::parse("0.126")),
                                 XComplex(XReal::parse("-0.387"), XReal::parse("-0.163")), 30, 2);

    const fs::path file = tmp / "orbit.csv";
    write_trajectory_csv(file, t);
    const Trajectory back = qpo::read_trajectory_csv(file);

    REQUIRE(back.size() == 30);
    REQUIRE(back.dim() == 2);
    for (std::size_t n = 0; n < t.size(); ++n) {
        CHECK(back.x[n] == t.x[n]);
        CHECK(back.y[n] == t.y[n]);
    }
    CHECK(back.meta.generator == "henon");
    CHECK(back.meta.stride == 2);
    REQUIRE(back.meta.params.size() == 5);
    CHECK(back.meta.params[2].first == "alpha");
    CHECK(XReal::parse(back.meta.params[2].second) == p.alpha);
}

TEST_CASE("a missing sidecar leaves the points with blank metadata") {
    Scratch tmp("nosidecar");
    const qpo::SiegelMapParams p(qpo::constants::golden_mean());
    const Trajectory t = iterate(p, XComplex(XReal::parse("0.1")), 10);

    const fs::path file = tmp / "orbit.csv";
    write_trajectory_csv(file, t);
    fs::remove(tmp / "orbit.csv.meta");

    const Trajectory back = qpo::read_trajectory_csv(file);
    REQUIRE(back.size() == 10);
    for (std::size_t n = 0; n < t.size(); ++n) CHECK(back.x[n] == t.x[n]);
    CHECK(back.meta.generator.empty());
    CHECK(back.meta.n_requested == 0);
    CHECK(back.meta.params.empty());
}

TEST_CASE("trajectory files reject structural damage") {
    Scratch tmp("trajerr");
    CHECK_THROWS_AS(qpo::read_trajectory_csv(tmp / "absent.csv"), qpo::io_error);

    spit(tmp / "empty.csv", "");
    CHECK_THROWS_AS(qpo::read_trajectory_csv(tmp / "empty.csv"), qpo::io_error);

    spit(tmp / "badheader.csv", "time,value\n0,1\n");
    CHECK_THROWS_AS(qpo::read_trajectory_csv(tmp / "badheader.csv"), qpo::io_error);

    spit(tmp / "short.csv", "n,x_re,x_im\n0,0.5\n");
    CHECK_THROWS_AS(qpo::read_trajectory_csv(tmp / "short.csv"), qpo::io_error);

    spit(tmp / "headonly.csv", "n,x_re,x_im\n");
    CHECK_THROWS_AS(qpo::read_trajectory_csv(tmp / "headonly.csv"), qpo::io_error);

    const qpo::SiegelMapParams p(qpo::constants::golden_mean());
    const Trajectory t = iterate(p, XComplex(XReal::parse("0.1")), 3);
    CHECK_THROWS_AS(write_trajectory_csv(tmp / "no" / "such" / "dir.csv", t), qpo::io_error);
}

TEST_CASE("spectra round trip with headers intact") {
    Scratch tmp("spec");
    const Spectrum s = sample_spectrum();

    const fs::path file = tmp / "modes.csv";
    write_spectrum(file, s);
    const Spectrum back = qpo::read_spectrum(file);

    CHECK(back.rho == s.rho);
    CHECK(back.kind.name() == s.kind.name());
    CHECK(back.n_samples == s.n_samples);
    CHECK(back.noise_floor == s.noise_floor);
    REQUIRE(back.coeffs.size() == s.coeffs.size());
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) CHECK(back.coeffs[k] == s.coeffs[k]);

    const fs::path file2 = tmp / "modes2.csv";
    write_spectrum(file2, back);
    CHECK(slurp(file2) == slurp(file));
}

TEST_CASE("spectrum files demand a rotation rate and contiguous modes") {
    Scratch tmp("specerr");

    spit(tmp / "norho.csv", "# weight=bump2\nk,re,im\n0,1,0\n");
    CHECK_THROWS_AS(qpo::read_spectrum(tmp / "norho.csv"), qpo::io_error);

    spit(tmp / "gap.csv", "# rho=0.5\nk,re,im\n0,1,0\n2,0.5,0\n");
    CHECK_THROWS_AS(qpo::read_spectrum(tmp / "gap.csv"), qpo::io_error);

    spit(tmp / "empty.csv", "# rho=0.5\nk,re,im\n");
    CHECK_THROWS_AS(qpo::read_spectrum(tmp / "empty.csv"), qpo::io_error);

    spit(tmp / "badrow.csv", "# rho=0.5\nk,re,im\n0,1\n");
    CHECK_THROWS_AS(qpo::read_spectrum(tmp / "badrow.csv"), qpo::io_error);

    CHECK_THROWS_AS(qpo::read_spectrum(tmp / "absent.csv"), qpo::io_error);
}

TEST_CASE("series round trip and reject missing scale") {
    Scratch tmp("series");
    ConjugacySeries s;
    s.r0 = XReal::parse("0.288");
    XReal v(1);
    for (int k = 0; k < 12; ++k) {
        s.a.push_back({v, v / XReal(3)});
        v = v * XReal::parse("-0.9");
    }

    const fs::path file = tmp / "series.csv";
    write_series(file, s);
    const ConjugacySeries back = qpo::read_series(file);
    CHECK(back.r0 == s.r0);
    REQUIRE(back.a.size() == s.a.size());
    for (std::size_t k = 0; k < s.a.size(); ++k) CHECK(back.a[k] == s.a[k]);

    const fs::path file2 = tmp / "series2.csv";
    write_series(file2, back);
    CHECK(slurp(file2) == slurp(file));

    spit(tmp / "nor0.csv", "# modes=1\nk,re,im\n0,1,0\n");
    CHECK_THROWS_AS(qpo::read_series(tmp / "nor0.csv"), qpo::io_error);

    spit(tmp / "badrow.csv", "# r0=0.5\nk,re,im\n0,1,0,9\n");
    CHECK_THROWS_AS(qpo::read_series(tmp / "badrow.csv"), qpo::io_error);
}
