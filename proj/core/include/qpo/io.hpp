#pragma once

#include <filesystem>
#include <stdexcept>

#include "qpo/maps.hpp"
#include "qpo/spectrum.hpp"

namespace qpo {

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& why);
};

// CSV columns n,x_re,x_im[,y_re,y_im], values with 36 significant digits.
// A sidecar "<path>.meta" records generator, parameters, stride, and the
// transient-discard count (always written, even when zero).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// Reads the CSV and, when present, the sidecar; a missing sidecar just
// leaves the metadata empty.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

// '#'-prefixed key=value header lines followed by k,re,im rows.
void write_spectrum(const std::filesystem::path& path, const Spectrum& spec);
Spectrum read_spectrum(const std::filesystem::path& path);

// '#'-prefixed header carrying r0, then k,re,im rows.
void write_series(const std::filesystem::path& path, const ConjugacySeries& series);
ConjugacySeries read_series(const std::filesystem::path& path);

}  // namespace qpo
