#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "corrsamp/harness.hpp"
#include "corrsamp/sampling_ops.hpp"

namespace corrsamp {

/// Measurement archive: a JSON document
///
///   format       "corrsamp-measurements"
///   version      1
///   operator     {arch, M, W, omega, seed}
///   diversifiers {mask: [[col, ...] per channel]} or {signs: [[+-1, ...] per channel]},
///                plus {mixer: [[...] per row], filter_re: [...], filter_im: [...]}
///                for the universal variants
///   ensemble     {kind, R, burst_len, seed} or null (how the truth was generated)
///   noise        {sigma, delta, seed} or null
///   y            [...]
///
/// Doubles are written in shortest round-trip form. On load the diversifiers are
/// regenerated from the operator seed and compared bit for bit.
struct EnsembleInfo {
    Ensemble kind = Ensemble::Gaussian;
    Index R = 0;
    Index burst_len = 8;
    std::uint64_t seed = 0;
};

struct MeasurementArchive {
    MeasurementRecord record;
    std::optional<EnsembleInfo> ensemble;
};

void write_archive(std::ostream& os, const MeasurementArchive& ar);
MeasurementArchive read_archive(std::istream& in);

void save_archive(const std::string& path, const MeasurementArchive& ar);
MeasurementArchive load_archive(const std::string& path);

/// Acquires one trial (ensemble, operator, optional noise) as an archive.
MeasurementArchive sample_trial(const TrialSpec& t);

/// Ground truth regenerated from the ensemble block.
SampleMatrix archive_truth(const MeasurementArchive& ar);

} // namespace corrsamp
