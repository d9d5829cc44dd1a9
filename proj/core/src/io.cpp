#include "qpo/io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace qpo {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// key=value with everything after the first '=' kept verbatim.
bool split_kv(const std::string& line, std::string& key, std::string& value) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = line.substr(0, eq);
    value = line.substr(eq + 1);
    return true;
}

}  // namespace

io_error::io_error(const std::string& why) : std::runtime_error(why) {}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    const bool two = traj.dim() == 2;
    out << (two ? "n,x_re,x_im,y_re,y_im\n" : "n,x_re,x_im\n");
    for (std::size_t n = 0; n < traj.size(); ++n) {
        out << n << ',' << traj.x[n].re.str() << ',' << traj.x[n].im.str();
        if (two) out << ',' << traj.y[n].re.str() << ',' << traj.y[n].im.str();
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path.string());

    auto meta = open_out(path.string() + ".meta");
    meta << "generator=" << traj.meta.generator << '\n';
    meta << "n_requested=" << traj.meta.n_requested << '\n';
    meta << "stride=" << traj.meta.stride << '\n';
    meta << "transient_discard=" << traj.meta.transient_discard << '\n';
    meta << "points=" << traj.size() << '\n';
    for (const auto& [k, v] : traj.meta.params) meta << "param." << k << '=' << v << '\n';
    if (!meta) throw io_error("write failed: " + path.string() + ".meta");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty trajectory file: " + path.string());
    const bool two = line == "n,x_re,x_im,y_re,y_im";
    if (!two && line != "n,x_re,x_im")
        throw io_error("unrecognized trajectory header in " + path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != (two ? 5u : 3u))
            throw io_error("bad row '" + line + "' in " + path.string());
        traj.x.push_back({XReal::parse(f[1]), XReal::parse(f[2])});
        if (two) traj.y.push_back({XReal::parse(f[3]), XReal::parse(f[4])});
    }
    if (traj.x.empty()) throw io_error("no points in " + path.string());

    std::ifstream meta(path.string() + ".meta");
    if (meta) {
        std::string key, value;
        while (std::getline(meta, line)) {
            if (!split_kv(line, key, value)) continue;
            if (key == "generator") traj.meta.generator = value;
            else if (key == "n_requested") traj.meta.n_requested = std::stoull(value);
            else if (key == "stride") traj.meta.stride = std::stoull(value);
            else if (key == "transient_discard") traj.meta.transient_discard = std::stoull(value);
            else if (key.starts_with("param."))
                traj.meta.params.emplace_back(key.substr(6), value);
        }
    }
    return traj;
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spec) {
    auto out = open_out(path);
    out << "# rho=" << spec.rho.str() << '\n';
    out << "# weight=" << spec.kind.name() << '\n';
    out << "# n_samples=" << spec.n_samples << '\n';
    out << "# noise_floor=" << spec.noise_floor.str() << '\n';
    out << "# modes=" << spec.coeffs.size() << '\n';
    out << "k,re,im\n";
    for (std::size_t k = 0; k < spec.coeffs.size(); ++k)
        out << k << ',' << spec.coeffs[k].re.str() << ',' << spec.coeffs[k].im.str() << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

Spectrum read_spectrum(const std::filesystem::path& path) {
    auto in = open_in(path);
    Spectrum spec;
    spec.noise_floor = kDefaultNoiseFloor;
    std::string line, key, value;
    bool saw_rho = false;
    while (std::getline(in, line)) {
        if (line.starts_with("# ")) {
            if (!split_kv(line.substr(2), key, value)) continue;
            if (key == "rho") { spec.rho = XReal::parse(value); saw_rho = true; }
            else if (key == "weight") spec.kind = WeightKind::from_name(value);
            else if (key == "n_samples") spec.n_samples = std::stoull(value);
            else if (key == "noise_floor") spec.noise_floor = XReal::parse(value);
            continue;
        }
        if (line == "k,re,im") continue;
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 3) throw io_error("bad row '" + line + "' in " + path.string());
        if (std::stoull(f[0]) != spec.coeffs.size())
            throw io_error("non-contiguous mode indices in " + path.string());
        spec.coeffs.push_back({XReal::parse(f[1]), XReal::parse(f[2])});
    }
    if (!saw_rho) throw io_error("missing rho header in " + path.string());
    if (spec.coeffs.empty()) throw io_error("no modes in " + path.string());
    return spec;
}

void write_series(const std::filesystem::path& path, const ConjugacySeries& series) {
    auto out = open_out(path);
    out << "# r0=" << series.r0.str() << '\n';
    out << "# modes=" << series.a.size() << '\n';
    out << "k,re,im\n";
    for (std::size_t k = 0; k < series.a.size(); ++k)
        out << k << ',' << series.a[k].re.str() << ',' << series.a[k].im.str() << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

ConjugacySeries read_series(const std::filesystem::path& path) {
    auto in = open_in(path);
    ConjugacySeries series;
    std::string line, key, value;
    bool saw_r0 = false;
    while (std::getline(in, line)) {
        if (line.starts_with("# ")) {
            if (split_kv(line.substr(2), key, value) && key == "r0") {
                series.r0 = XReal::parse(value);
                saw_r0 = true;
            }
            continue;
        }
        if (line == "k,re,im" || line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 3) throw io_error("bad row '" + line + "' in " + path.string());
        series.a.push_back({XReal::parse(f[1]), XReal::parse(f[2])});
    }
    if (!saw_r0) throw io_error("missing r0 header in " + path.string());
    if (series.a.empty()) throw io_error("no modes in " + path.string());
    return series;
}

}  // namespace qpo
