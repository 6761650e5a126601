// corrsamp: experiment driver for compressive sampling of correlated signal ensembles.
//
// Exit codes: 0 success, 1 invariant failure, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "corrsamp/archive.hpp"
#include "corrsamp/config.hpp"
#include "corrsamp/harness.hpp"
#include "corrsamp/invariants.hpp"
#include "corrsamp/recovery.hpp"

namespace fs = std::filesystem;
using namespace corrsamp;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    Index threads = 0;
    std::string scale = "desk";
    bool timing = false;
    std::string fault = "none";
    std::string archive;
};

ConfigMap read_config(const Options& o) { return o.config.empty() ? ConfigMap{} : load_config(o.config); }

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write '" + path + "'");
    return out;
}

void write_plot(ExperimentKind kind, const std::string& csv) {
    const fs::path p(csv);
    const fs::path script = p.parent_path() / (p.stem().string() + "_plot.py");
    open_out(script.string()) << plot_script(kind, p.filename().string());
}

int run_experiment(ExperimentKind kind, const Options& o) {
    ExperimentSpec spec = default_spec(kind, o.scale);
    ConfigMap cfg = read_config(o);
    cfg.erase("experiment");
    apply_config(spec, cfg);
    if (o.seed) spec.seed = *o.seed;
    if (o.threads > 0) spec.threads = o.threads;
    spec.validate();
    const std::string path = o.out.empty() ? to_string(kind) + ".csv" : o.out;

    std::ostringstream csv;
    if (kind == ExperimentKind::ArrayDemo) {
        const auto rows = run_array_demo(spec);
        write_csv(csv, rows);
        std::cout << "effective rank at ratio " << format_double(spec.eig_ratio) << ": "
                  << rows.front().effective_rank << '\n';
    } else {
        std::vector<ExperimentRow> rows;
        if (kind == ExperimentKind::Stability) rows = run_stability(spec);
        else if (kind == ExperimentKind::ArchCompare) rows = run_arch_compare(spec);
        else rows = run_phase_transition(spec);
        write_csv(csv, rows, o.timing);
        for (const auto& r : rows) {
            std::printf("point %lld  %s/%s  M=%lld R=%lld omega=%lld eta=%.3f  success %lld/%lld  "
                        "median rel_error %.3e%s\n",
                        static_cast<long long>(r.point), r.arch.c_str(), r.ensemble.c_str(),
                        static_cast<long long>(r.M), static_cast<long long>(r.R),
                        static_cast<long long>(r.Omega), r.eta, static_cast<long long>(r.successes),
                        static_cast<long long>(r.trials), r.median_rel_error,
                        r.feasible ? "" : "  (infeasible)");
        }
    }
    open_out(path) << csv.str();
    write_plot(kind, path);
    std::cout << "wrote " << path << '\n';
    return 0;
}

int run_invariants(const Options& o) {
    if (o.fault != "none" && o.fault != "adjoint-sign")
        throw ParameterError("unknown fault '" + o.fault + "'");
    const auto results = run_invariant_suite(o.seed.value_or(1),
                                             o.fault == "adjoint-sign" ? Fault::AdjointSignFlip : Fault::None);
    const std::string report = format_report(results);
    std::cout << report;
    if (!o.out.empty()) open_out(o.out) << report;
    for (const auto& r : results)
        if (!r.passed) return 1;
    return 0;
}

TrialSpec default_trial(const std::string& scale) {
    require(scale == "desk" || scale == "paper", "scale must be 'desk' or 'paper'");
    TrialSpec t;
    t.M = scale == "paper" ? 100 : 32;
    t.W = scale == "paper" ? 1024 : 128;
    t.R = 2;
    t.Omega = 64;
    t.seed = 1;
    return t;
}

int run_sample(const Options& o) {
    TrialSpec t = default_trial(o.scale);
    apply_config(t, read_config(o));
    if (o.seed) t.seed = *o.seed;
    const MeasurementArchive ar = sample_trial(t);
    const std::string path = o.out.empty() ? "measurements.json" : o.out;
    std::ostringstream text;
    write_archive(text, ar);
    open_out(path) << text.str();
    std::cout << "wrote " << ar.record.y.size() << " measurements to " << path << '\n';
    return 0;
}

int run_recover(const Options& o) {
    const MeasurementArchive ar = load_archive(o.archive);
    TrialSpec t;
    apply_config(t, read_config(o));
    SolverConfig solver = t.solver;
    const MeasurementOperator op(ar.record.op);
    std::optional<SampleMatrix> truth;
    if (ar.ensemble) truth = archive_truth(ar);
    RecoveryResult res;
    if (ar.record.noise) {
        solver.delta = ar.record.noise->delta;
        res = solve_nuclear_noisy(op, ar.record.y, solver, truth ? &*truth : nullptr);
    } else {
        res = solve_nuclear_equality(op, ar.record.y, solver, truth ? &*truth : nullptr);
    }
    std::cout << "iterations " << res.iters << (res.converged ? " (converged)" : " (iteration limit)") << '\n'
              << "nuclear norm " << format_double(res.objective) << '\n';
    if (res.rel_error) std::cout << "rel_error " << format_double(*res.rel_error) << '\n';
    if (!o.out.empty()) {
        std::ostringstream csv;
        for (Index i = 0; i < res.X_hat.rows(); ++i) {
            for (Index k = 0; k < res.X_hat.cols(); ++k)
                csv << (k ? "," : "") << format_double(res.X_hat(i, k));
            csv << '\n';
        }
        open_out(o.out) << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive sampling of correlated signal ensembles"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--out", o.out, "output path");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--scale", o.scale, "preset scale")->check(CLI::IsMember({"desk", "paper"}));

    struct Sub {
        const char* name;
        const char* help;
        std::optional<ExperimentKind> kind;
    };
    const std::vector<Sub> subs = {
        {"phase-rank", "minimal rate versus rank", ExperimentKind::PhaseRank},
        {"phase-channels", "minimal rate versus channel count", ExperimentKind::PhaseChannels},
        {"stability", "relative error versus SNR or oversampling", ExperimentKind::Stability},
        {"arch-compare", "architectures on incoherent and spike ensembles", ExperimentKind::ArchCompare},
        {"array-demo", "eigenvalues of the array covariance", ExperimentKind::ArrayDemo},
        {"invariants", "run the invariant suite", ExperimentKind::Invariants},
        {"sample", "acquire one ensemble and write a measurement archive", std::nullopt},
        {"recover", "recover an ensemble from a measurement archive", std::nullopt},
    };
    std::map<std::string, CLI::App*> cmds;
    for (const auto& s : subs) {
        CLI::App* c = app.add_subcommand(s.name, s.help);
        cmds[s.name] = c;
        if (s.kind && *s.kind != ExperimentKind::Invariants && *s.kind != ExperimentKind::ArrayDemo)
            c->add_flag("--timing", o.timing, "add a wall_seconds column (not reproducible)");
    }
    cmds["invariants"]->add_option("--inject-fault", o.fault, "debug fault: none or adjoint-sign");
    cmds["recover"]->add_option("archive", o.archive, "measurement archive")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& s : subs) {
            if (!cmds[s.name]->parsed()) continue;
            if (std::string(s.name) == "sample") return run_sample(o);
            if (std::string(s.name) == "recover") return run_recover(o);
            if (*s.kind == ExperimentKind::Invariants) return run_invariants(o);
            return run_experiment(*s.kind, o);
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UndefinedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
