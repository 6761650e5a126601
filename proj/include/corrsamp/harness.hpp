#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrsamp/common.hpp"
#include "corrsamp/recovery.hpp"
#include "corrsamp/sampling_ops.hpp"

namespace corrsamp {

enum class ExperimentKind { PhaseRank, PhaseChannels, Stability, ArchCompare, ArrayDemo, Invariants };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

enum class Ensemble { Gaussian, Spike };

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& name);

/// Everything a harness run depends on. Identical specs give byte-identical output.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::PhaseRank;
    Index M = 32;
    Index W = 128;
    std::vector<double> grid;      ///< R values, M values, SNR (dB) or eta values
    Index trials = 20;
    double threshold = 1e-2;       ///< relative-error success threshold
    double target = 0.9;           ///< required success probability
    std::uint64_t seed = 1;
    Architecture arch = Architecture::RandomDemodulator;
    SolverConfig solver;
    Index threads = 1;

    Index rank = 2;                ///< fixed rank for channel sweeps, stability and comparisons
    double eta = 3.5;              ///< stability: oversampling factor for SNR sweeps
    double snr = 40.0;             ///< stability: SNR for eta sweeps
    bool sweep_eta = false;        ///< stability: grid holds eta values instead of SNRs
    Index omega = 40;              ///< arch-compare: base rate
    Index omega_step = 8;          ///< Omega scan step for entry-sampling architectures
    double omega_inflation = 2.0;  ///< arch-compare: rate multiplier with preprocessing
    Index burst_len = 8;           ///< spike ensemble burst length

    double carrier = 5e9;
    double bandwidth = 100e6;
    double theta = kPi / 4;
    Index array_M = 101;
    Index quad_points = 512;
    double eig_ratio = 1e4;

    void validate() const;
};

/// Defaults for a kind at "desk" or "paper" scale.
ExperimentSpec default_spec(ExperimentKind kind, const std::string& scale = "desk");

/// One recovery trial. Reproducible in isolation from its fields.
struct TrialSpec {
    Architecture arch = Architecture::RandomDemodulator;
    Ensemble ensemble = Ensemble::Gaussian;
    Index M = 0, W = 0, R = 0, Omega = 0;
    Index burst_len = 8;
    std::optional<double> snr; ///< dB; nullopt means noiseless
    std::uint64_t seed = 0;
    SolverConfig solver;
};

struct TrialOutcome {
    double rel_error = 0.0;
    Index iters = 0;
    bool converged = false;
};

SampleMatrix trial_ensemble(const TrialSpec& t);
OperatorDescriptor trial_operator(const TrialSpec& t);
TrialOutcome run_trial(const TrialSpec& t);

/// Runs trials on `threads` workers; results are in input order. When `max_failures`
/// is set, remaining trials may be skipped once that many have failed `threshold`.
std::vector<std::optional<TrialOutcome>> run_trials(const std::vector<TrialSpec>& trials,
                                                    Index threads,
                                                    std::optional<Index> max_failures = std::nullopt,
                                                    double threshold = 1e-2);

/// Seed of trial t at a grid point.
std::uint64_t trial_seed(std::uint64_t point_seed, Index t);

/// One CSV record.
struct ExperimentRow {
    std::string experiment;
    Index point = 0;
    std::string arch;
    std::string ensemble;
    Index M = 0, W = 0, R = 0, Omega = 0;
    std::optional<double> snr;
    double eta = 0.0;
    Index trials = 0;
    Index successes = 0;
    double median_rel_error = 0.0;
    double median_iters = 0.0;
    bool feasible = true;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;

    double success_fraction() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

struct ArrayDemoRow {
    Index k = 0;
    double eigenvalue = 0.0;
    double normalized = 0.0;
    Index effective_rank = 0;
};

/// Omega candidates scanned by the phase-transition search, ascending.
std::vector<Index> omega_candidates(Architecture arch, Index M, Index W, Index R, Index step);

/// Divisor of W closest to `omega` (ties go to the larger divisor).
Index nearest_divisor(Index W, double omega);

std::vector<ExperimentRow> run_phase_transition(const ExperimentSpec& spec);
std::vector<ExperimentRow> run_stability(const ExperimentSpec& spec);
std::vector<ExperimentRow> run_arch_compare(const ExperimentSpec& spec);
std::vector<ArrayDemoRow> run_array_demo(const ExperimentSpec& spec);

double median(std::vector<double> v);

/// Shortest round-trip formatting with 17 significant digits.
std::string format_double(double x);

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, bool with_timing = false);
void write_csv(std::ostream& os, const std::vector<ArrayDemoRow>& rows);

/// Small matplotlib script that plots a CSV written by write_csv.
std::string plot_script(ExperimentKind kind, const std::string& csv_path);

} // namespace corrsamp
