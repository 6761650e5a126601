#include "corrsamp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "corrsamp/seeding.hpp"
#include "corrsamp/signal_model.hpp"

namespace corrsamp {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::PhaseRank: return "phase-rank";
    case ExperimentKind::PhaseChannels: return "phase-channels";
    case ExperimentKind::Stability: return "stability";
    case ExperimentKind::ArchCompare: return "arch-compare";
    case ExperimentKind::ArrayDemo: return "array-demo";
    case ExperimentKind::Invariants: return "invariants";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '_', '-');
    for (auto k : {ExperimentKind::PhaseRank, ExperimentKind::PhaseChannels, ExperimentKind::Stability,
                   ExperimentKind::ArchCompare, ExperimentKind::ArrayDemo, ExperimentKind::Invariants})
        if (to_string(k) == n) return k;
    throw ParameterError("unknown experiment kind '" + name + "'");
}

std::string to_string(Ensemble e) { return e == Ensemble::Gaussian ? "gaussian" : "spike"; }

Ensemble ensemble_from_string(const std::string& name) {
    if (name == "gaussian") return Ensemble::Gaussian;
    if (name == "spike") return Ensemble::Spike;
    throw ParameterError("unknown ensemble '" + name + "'");
}

void ExperimentSpec::validate() const {
    solver.validate();
    require(M >= 1 && W >= 1, "spec: M and W must be positive");
    require(trials >= 1, "spec: trials must be at least 1");
    require(threshold > 0, "spec: threshold must be positive");
    require(target > 0 && target <= 1, "spec: target must lie in (0, 1]");
    require(threads >= 1, "spec: threads must be at least 1");
    require(rank >= 1, "spec: rank must be at least 1");
    require(omega >= 1 && omega_step >= 1, "spec: omega and omega_step must be positive");
    require(burst_len >= 1, "spec: burst_len must be positive");
    const bool needs_grid = kind == ExperimentKind::PhaseRank || kind == ExperimentKind::PhaseChannels ||
                            kind == ExperimentKind::Stability;
    require(!needs_grid || !grid.empty(), "spec: grid must be nonempty");
    for (double g : grid) {
        if (kind == ExperimentKind::PhaseRank || kind == ExperimentKind::PhaseChannels)
            require(g >= 1 && g == std::floor(g), "spec: rank/channel grid values must be positive integers");
        if (kind == ExperimentKind::Stability && sweep_eta) require(g > 0, "spec: eta grid values must be positive");
    }
}

ExperimentSpec default_spec(ExperimentKind kind, const std::string& scale) {
    require(scale == "desk" || scale == "paper", "scale must be 'desk' or 'paper'");
    const bool paper = scale == "paper";
    ExperimentSpec s;
    s.kind = kind;
    if (paper) {
        s.M = 100;
        s.W = 1024;
        s.trials = 100;
        s.target = 0.99;
        s.omega_step = 32;
    }
    switch (kind) {
    case ExperimentKind::PhaseRank:
        s.grid = paper ? std::vector<double>{5, 10, 15, 20, 25, 30} : std::vector<double>{1, 2, 4};
        break;
    case ExperimentKind::PhaseChannels:
        s.rank = paper ? 10 : 2;
        s.grid = paper ? std::vector<double>{50, 75, 100, 125, 150} : std::vector<double>{16, 32, 64};
        break;
    case ExperimentKind::Stability:
        s.rank = paper ? 15 : 4;
        s.grid = {20, 30, 40};
        break;
    case ExperimentKind::ArchCompare:
        s.rank = 2;
        s.omega = paper ? 160 : 40;
        break;
    case ExperimentKind::ArrayDemo:
    case ExperimentKind::Invariants:
        break;
    }
    return s;
}

std::uint64_t trial_seed(std::uint64_t point_seed, Index t) {
    return derive_seed(point_seed, "trial", static_cast<std::uint64_t>(t));
}

SampleMatrix trial_ensemble(const TrialSpec& t) {
    const std::uint64_t s = derive_seed(t.seed, "ensemble");
    if (t.ensemble == Ensemble::Spike) return gen_spike_ensemble(t.M, t.W, t.R, t.burst_len, s);
    return gen_lowrank_gaussian(t.M, t.W, t.R, s);
}

OperatorDescriptor trial_operator(const TrialSpec& t) {
    return {t.arch, t.M, t.W, t.Omega, derive_seed(t.seed, "operator")};
}

TrialOutcome run_trial(const TrialSpec& t) {
    const SampleMatrix X0 = trial_ensemble(t);
    const MeasurementOperator op(trial_operator(t));
    MeasurementRecord rec = acquire(op, X0);
    RecoveryResult res;
    if (t.snr && std::isfinite(*t.snr)) {
        const double sigma = sigma_for_snr(rec.y, *t.snr);
        rec = add_noise(rec, sigma, derive_seed(t.seed, "noise"));
        SolverConfig cfg = t.solver;
        cfg.delta = rec.noise->delta;
        res = solve_nuclear_noisy(op, rec.y, cfg, &X0);
    } else {
        res = solve_nuclear_equality(op, rec.y, t.solver, &X0);
    }
    return {*res.rel_error, res.iters, res.converged};
}

std::vector<std::optional<TrialOutcome>> run_trials(const std::vector<TrialSpec>& trials, Index threads,
                                                    std::optional<Index> max_failures, double threshold) {
    std::vector<std::optional<TrialOutcome>> out(trials.size());
    std::atomic<std::size_t> next{0};
    std::atomic<Index> failures{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= trials.size()) return;
            if (max_failures && failures.load() > *max_failures) continue;
            try {
                out[i] = run_trial(trials[i]);
                if (!(out[i]->rel_error <= threshold)) failures.fetch_add(1);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    const Index n = std::max<Index>(1, std::min<Index>(threads, static_cast<Index>(trials.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (Index k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

double median(std::vector<double> v) {
    require(!v.empty(), "median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Index nearest_divisor(Index W, double omega) {
    Index best = 1;
    double best_gap = std::abs(omega - 1.0);
    for (Index d = 2; d <= W; ++d) {
        if (W % d != 0) continue;
        const double gap = std::abs(omega - static_cast<double>(d));
        if (gap <= best_gap) {
            best = d;
            best_gap = gap;
        }
    }
    return best;
}

std::vector<Index> omega_candidates(Architecture arch, Index M, Index W, Index R, Index step) {
    // Below eta = 1 there are fewer samples than degrees of freedom.
    const Index dof = R * (W + M - R);
    std::vector<Index> out;
    auto consider = [&](Index omega) {
        if (M * omega >= dof) out.push_back(omega);
    };
    if (uses_demodulator(arch)) {
        for (Index d = 1; d <= W; ++d)
            if (W % d == 0) consider(d);
    } else {
        for (Index o = step; o < W; o += step) consider(o);
        consider(W);
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

ExperimentRow summarize(const std::vector<std::optional<TrialOutcome>>& outcomes, double threshold) {
    ExperimentRow row;
    std::vector<double> errors, iters;
    for (const auto& o : outcomes) {
        errors.push_back(o->rel_error);
        iters.push_back(static_cast<double>(o->iters));
        if (o->rel_error <= threshold) ++row.successes;
    }
    row.trials = static_cast<Index>(outcomes.size());
    row.median_rel_error = median(errors);
    row.median_iters = median(iters);
    return row;
}

bool all_ran(const std::vector<std::optional<TrialOutcome>>& outcomes) {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.has_value(); });
}

std::vector<TrialSpec> make_trials(const TrialSpec& base, std::uint64_t point_seed, Index count) {
    std::vector<TrialSpec> out(count, base);
    for (Index t = 0; t < count; ++t) out[t].seed = trial_seed(point_seed, t);
    return out;
}

Index required_successes(const ExperimentSpec& spec) {
    return static_cast<Index>(std::ceil(spec.target * static_cast<double>(spec.trials) - 1e-9));
}

} // namespace

std::vector<ExperimentRow> run_phase_transition(const ExperimentSpec& spec) {
    spec.validate();
    require(spec.kind == ExperimentKind::PhaseRank || spec.kind == ExperimentKind::PhaseChannels,
            "run_phase_transition: spec is not a phase-transition experiment");
    const Index needed = required_successes(spec);
    std::vector<ExperimentRow> rows;
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
        const auto start = Clock::now();
        const Index value = static_cast<Index>(spec.grid[p]);
        const Index M = spec.kind == ExperimentKind::PhaseRank ? spec.M : value;
        const Index R = spec.kind == ExperimentKind::PhaseRank ? value : spec.rank;
        require(R <= std::min(M, spec.W), "phase transition: rank exceeds min(M, W)");
        const std::uint64_t point_seed = derive_seed(spec.seed, "point", p);

        TrialSpec base;
        base.arch = spec.arch;
        base.M = M;
        base.W = spec.W;
        base.R = R;
        base.solver = spec.solver;

        const auto candidates = omega_candidates(spec.arch, M, spec.W, R, spec.omega_step);
        ExperimentRow row;
        bool found = false;
        for (std::size_t c = 0; c < candidates.size() && !found; ++c) {
            base.Omega = candidates[c];
            const bool last = c + 1 == candidates.size();
            const auto outcomes =
                run_trials(make_trials(base, point_seed, spec.trials), spec.threads,
                           last ? std::nullopt : std::optional<Index>(spec.trials - needed), spec.threshold);
            if (!all_ran(outcomes)) continue;
            row = summarize(outcomes, spec.threshold);
            row.Omega = base.Omega;
            found = row.successes >= needed;
        }
        if (candidates.empty()) {
            row.Omega = spec.W;
            row.trials = 0;
        }
        row.experiment = to_string(spec.kind);
        row.point = static_cast<Index>(p);
        row.arch = to_string(spec.arch);
        row.ensemble = to_string(Ensemble::Gaussian);
        row.M = M;
        row.W = spec.W;
        row.R = R;
        row.eta = oversampling_factor(M, row.Omega, R, spec.W);
        row.feasible = found;
        row.seed = point_seed;
        row.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<ExperimentRow> run_stability(const ExperimentSpec& spec) {
    spec.validate();
    require(spec.kind == ExperimentKind::Stability, "run_stability: spec is not a stability experiment");
    require(spec.rank <= std::min(spec.M, spec.W), "stability: rank exceeds min(M, W)");
    const Index dof = spec.rank * (spec.W + spec.M - spec.rank);
    auto omega_for = [&](double eta) {
        const double ideal = eta * static_cast<double>(dof) / static_cast<double>(spec.M);
        if (uses_demodulator(spec.arch)) return nearest_divisor(spec.W, ideal);
        return std::clamp<Index>(static_cast<Index>(std::llround(ideal)), 1, spec.W);
    };
    // Common random numbers: every grid point reuses the same ensembles, operators and
    // noise directions, so trends along the grid are not masked by resampling.
    const std::uint64_t base_seed = derive_seed(spec.seed, "stability");

    std::vector<ExperimentRow> rows;
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
        const auto start = Clock::now();
        TrialSpec base;
        base.arch = spec.arch;
        base.M = spec.M;
        base.W = spec.W;
        base.R = spec.rank;
        base.solver = spec.solver;
        if (spec.sweep_eta) {
            base.Omega = omega_for(spec.grid[p]);
            base.snr = spec.snr;
        } else {
            base.Omega = omega_for(spec.eta);
            base.snr = spec.grid[p];
        }
        const auto outcomes = run_trials(make_trials(base, base_seed, spec.trials), spec.threads);
        ExperimentRow row = summarize(outcomes, spec.threshold);
        row.experiment = to_string(spec.kind);
        row.point = static_cast<Index>(p);
        row.arch = to_string(spec.arch);
        row.ensemble = to_string(Ensemble::Gaussian);
        row.M = spec.M;
        row.W = spec.W;
        row.R = spec.rank;
        row.Omega = base.Omega;
        row.snr = base.snr;
        row.eta = oversampling_factor(spec.M, base.Omega, spec.rank, spec.W);
        row.seed = base_seed;
        row.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<ExperimentRow> run_arch_compare(const ExperimentSpec& spec) {
    spec.validate();
    require(spec.rank <= std::min(spec.M, spec.W), "arch-compare: rank exceeds min(M, W)");
    struct Cell {
        Architecture arch;
        Ensemble ensemble;
    };
    const std::vector<Cell> cells = {
        {Architecture::RandomSampling, Ensemble::Gaussian},
        {Architecture::RandomSampling, Ensemble::Spike},
        {Architecture::UniversalSampling, Ensemble::Gaussian},
        {Architecture::UniversalSampling, Ensemble::Spike},
        {Architecture::RandomDemodulator, Ensemble::Gaussian},
        {Architecture::RandomDemodulator, Ensemble::Spike},
        {Architecture::UniversalDemodulator, Ensemble::Gaussian},
        {Architecture::UniversalDemodulator, Ensemble::Spike},
    };

    std::vector<ExperimentRow> rows;
    for (std::size_t p = 0; p < cells.size(); ++p) {
        const auto start = Clock::now();
        const Cell& cell = cells[p];
        double omega = static_cast<double>(spec.omega);
        if (uses_preprocessing(cell.arch)) omega *= spec.omega_inflation;
        Index Omega = std::clamp<Index>(static_cast<Index>(std::llround(omega)), 1, spec.W);
        if (uses_demodulator(cell.arch)) Omega = nearest_divisor(spec.W, omega);

        TrialSpec base;
        base.arch = cell.arch;
        base.ensemble = cell.ensemble;
        base.M = spec.M;
        base.W = spec.W;
        base.R = spec.rank;
        base.Omega = Omega;
        base.burst_len = spec.burst_len;
        base.solver = spec.solver;
        const std::uint64_t ensemble_seed = derive_seed(spec.seed, to_string(cell.ensemble));
        const auto outcomes = run_trials(make_trials(base, ensemble_seed, spec.trials), spec.threads);

        ExperimentRow row = summarize(outcomes, spec.threshold);
        row.experiment = to_string(ExperimentKind::ArchCompare);
        row.point = static_cast<Index>(p);
        row.arch = to_string(cell.arch);
        row.ensemble = to_string(cell.ensemble);
        row.M = spec.M;
        row.W = spec.W;
        row.R = spec.rank;
        row.Omega = Omega;
        row.eta = oversampling_factor(spec.M, Omega, spec.rank, spec.W);
        row.feasible = row.successes >= required_successes(spec);
        row.seed = ensemble_seed;
        row.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<ArrayDemoRow> run_array_demo(const ExperimentSpec& spec) {
    const CMatrix Raa = build_Raa(spec.theta, spec.carrier, spec.bandwidth, spec.array_M, spec.quad_points);
    const Vector eigs = hermitian_eigenvalues(Raa);
    const std::vector<double> list(eigs.data(), eigs.data() + eigs.size());
    const Index rank = effective_rank(list, spec.eig_ratio);
    std::vector<ArrayDemoRow> rows;
    for (Index k = 0; k < eigs.size(); ++k)
        rows.push_back({k + 1, eigs(k), eigs(k) / eigs(0), rank});
    return rows;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, bool with_timing) {
    os << "experiment,point,arch,ensemble,M,W,R,omega,snr_db,eta,trials,successes,success_fraction,"
          "median_rel_error,median_rel_error_db,median_iters,feasible,seed";
    if (with_timing) os << ",wall_seconds";
    os << '\n';
    for (const auto& r : rows) {
        os << r.experiment << ',' << r.point << ',' << r.arch << ',' << r.ensemble << ',' << r.M << ','
           << r.W << ',' << r.R << ',' << r.Omega << ',' << (r.snr ? format_double(*r.snr) : "") << ','
           << format_double(r.eta) << ',' << r.trials << ',' << r.successes << ','
           << format_double(r.success_fraction()) << ',' << format_double(r.median_rel_error) << ','
           << format_double(20.0 * std::log10(r.median_rel_error)) << ','
           << format_double(r.median_iters) << ',' << (r.feasible ? 1 : 0) << ',' << r.seed;
        if (with_timing) os << ',' << format_double(r.wall_seconds);
        os << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<ArrayDemoRow>& rows) {
    os << "k,eigenvalue,normalized,log10_normalized,effective_rank\n";
    for (const auto& r : rows)
        os << r.k << ',' << format_double(r.eigenvalue) << ',' << format_double(r.normalized) << ','
           << format_double(std::log10(std::max(r.normalized, 1e-300))) << ',' << r.effective_rank << '\n';
}

std::string plot_script(ExperimentKind kind, const std::string& csv_path) {
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
         "import csv\n"
         "import os\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n\n"
      << "path = os.path.join(os.path.dirname(os.path.abspath(__file__)), '" << csv_path << "')\n"
      << "rows = list(csv.DictReader(open(path)))\n"
         "fig, ax = plt.subplots()\n";
    switch (kind) {
    case ExperimentKind::PhaseRank:
        s << "rows = [r for r in rows if r['feasible'] == '1']\n"
             "x = [int(r['R']) for r in rows]; y = [int(r['omega']) for r in rows]\n"
             "ax.plot(x, y, 'ko')\n"
             "if len(x) > 1:\n"
             "    import numpy as np\n"
             "    slope, intercept = np.polyfit(x, y, 1)\n"
             "    print('least-squares fit: omega = %.6g R + %.6g' % (slope, intercept))\n"
             "    ax.plot(x, [slope * v + intercept for v in x], 'k--')\n"
             "ax.set_xlabel('R'); ax.set_ylabel('minimal Omega')\n";
        break;
    case ExperimentKind::PhaseChannels:
        s << "rows = [r for r in rows if r['feasible'] == '1']\n"
             "x = [1.0 / int(r['M']) for r in rows]; y = [int(r['omega']) for r in rows]\n"
             "ax.plot(x, y, 'ko')\n"
             "if len(x) > 1:\n"
             "    import numpy as np\n"
             "    slope, intercept = np.polyfit(x, y, 1)\n"
             "    print('least-squares fit: omega = %.6g / M + %.6g' % (slope, intercept))\n"
             "    ax.plot(x, [slope * v + intercept for v in x], 'k--')\n"
             "ax.set_xlabel('1/M'); ax.set_ylabel('minimal Omega')\n";
        break;
    case ExperimentKind::Stability:
        s << "x = [float(r['snr_db']) for r in rows]\n"
             "if len(set(x)) == 1:\n"
             "    x = [float(r['eta']) for r in rows]; ax.set_xlabel('eta')\n"
             "else:\n"
             "    ax.set_xlabel('SNR (dB)')\n"
             "ax.plot(x, [float(r['median_rel_error_db']) for r in rows], 'ko-')\n"
             "ax.set_ylabel('relative error (dB)')\n";
        break;
    case ExperimentKind::ArchCompare:
        s << "labels = [r['arch'] + '/' + r['ensemble'] for r in rows]\n"
             "ax.bar(range(len(rows)), [float(r['success_fraction']) for r in rows])\n"
             "ax.set_xticks(range(len(rows))); ax.set_xticklabels(labels, rotation=45, ha='right')\n"
             "ax.set_ylabel('success fraction')\n";
        break;
    case ExperimentKind::ArrayDemo:
        s << "ax.plot([int(r['k']) for r in rows], [float(r['log10_normalized']) for r in rows], 'ko')\n"
             "ax.set_xlabel('k'); ax.set_ylabel('log10(k-th largest eigenvalue)')\n";
        break;
    case ExperimentKind::Invariants:
        break;
    }
    s << "fig.tight_layout()\n"
      << "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    return s.str();
}

} // namespace corrsamp
