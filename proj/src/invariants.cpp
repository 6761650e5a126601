#include "corrsamp/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "corrsamp/coherence.hpp"
#include "corrsamp/diversify.hpp"
#include "corrsamp/recovery.hpp"
#include "corrsamp/seeding.hpp"
#include "corrsamp/signal_model.hpp"

namespace corrsamp {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

Matrix gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix A(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) A(i, j) = n(rng);
    return A;
}

// SVT through the eigendecomposition of Y^T Y; independent of the SVD route.
Matrix svt_via_gram(const Matrix& Y, double tau) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Y.transpose() * Y);
    Matrix out = Matrix::Zero(Y.rows(), Y.cols());
    for (Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double s = std::sqrt(std::max(eig.eigenvalues()(k), 0.0));
        if (s <= tau) continue;
        const Vector v = eig.eigenvectors().col(k);
        const Vector u = Y * v / s;
        out += (s - tau) * u * v.transpose();
    }
    return out;
}

} // namespace

CheckResult check_adjoint(Architecture arch, Index M, Index W, Index Omega, Index pairs,
                          std::uint64_t seed, Fault fault) {
    CheckResult r{"adjoint[" + to_string(arch) + "]", true, ""};
    double worst = 0.0;
    for (Index t = 0; t < pairs; ++t) {
        const auto draw = static_cast<std::uint64_t>(t);
        const MeasurementOperator op({arch, M, W, Omega, derive_seed(seed, "adjoint_op", draw)});
        Rng rng = make_rng(seed, "adjoint_pair", draw);
        const Matrix X = gaussian(M, W, rng);
        const Vector y = gaussian(op.measurements(), 1, rng);
        Matrix Aty = op.adjoint(y);
        if (fault == Fault::AdjointSignFlip) Aty = -Aty;
        const double gap = std::abs(op.forward(X).dot(y) - (X.array() * Aty.array()).sum());
        worst = std::max(worst, gap / (X.norm() * y.norm()));
    }
    r.passed = worst <= 1e-12;
    r.detail = "max relative gap " + sci(worst) + " over " + std::to_string(pairs) + " pairs";
    return r;
}

CheckResult check_operator_norm(Index M, Index W, Index Omega, std::uint64_t seed) {
    CheckResult r{"operator-norm[W=" + std::to_string(W) + ",omega=" + std::to_string(Omega) + "]", true, ""};
    const MeasurementOperator op({Architecture::RandomDemodulator, M, W, Omega, seed});
    const Matrix D = dense_matrix(op);
    Eigen::BDCSVD<Matrix> svd(D);
    const double top = svd.singularValues()(0);
    const double expected = std::sqrt(static_cast<double>(W) / static_cast<double>(Omega));
    r.passed = std::abs(top - expected) <= 1e-10;
    r.detail = "sigma_max - sqrt(W/omega) = " + sci(top - expected);
    return r;
}

CheckResult check_expectation_identity(Index M, Index W, Index Omega, Index draws, std::uint64_t seed) {
    const double dev = expectation_identity_check(M, W, Omega, draws, seed);
    return {"expectation-identity", dev <= 0.05,
            "relative deviation " + sci(dev) + " over " + std::to_string(draws) + " draws"};
}

CheckResult check_mask_projector(Index M, Index W, Index Omega, std::uint64_t seed) {
    const MeasurementOperator op({Architecture::RandomSampling, M, W, Omega, seed});
    const Matrix D = dense_matrix(op);
    const Index L = op.measurements();
    const double gram = (D * D.transpose() - Matrix::Identity(L, L)).norm();
    const Matrix P = D.transpose() * D;
    const double idem = (P * P - P).norm();
    return {"mask-projector", gram <= 1e-12 && idem <= 1e-12,
            "||AA* - I|| = " + sci(gram) + ", ||P^2 - P|| = " + sci(idem)};
}

CheckResult check_orthogonal_preprocessing(Index M, Index W, std::uint64_t seed) {
    const Mixer A = gen_mixer(M, derive_seed(seed, "avmm"));
    const FilterSpectrum h = gen_filter(W, derive_seed(seed, "lti"));
    const double mix = (A.A.transpose() * A.A - Matrix::Identity(M, M)).norm();
    const Matrix H = apply_filter(Matrix::Identity(W, W), h);
    const double filt = (H.transpose() * H - Matrix::Identity(W, W)).norm();
    return {"orthogonal-preprocessing", mix <= 1e-10 && filt <= 1e-10,
            "||A^T A - I|| = " + sci(mix) + ", ||H^T H - I|| = " + sci(filt)};
}

CheckResult check_coherence_bounds(Index count, std::uint64_t seed) {
    CheckResult r{"coherence-bounds", true, ""};
    constexpr double slack = 1e-9;
    Index violations = 0;
    for (Index t = 0; t < count; ++t) {
        const auto draw = static_cast<std::uint64_t>(t);
        Rng rng = make_rng(seed, "coherence_dims", draw);
        const Index M = std::uniform_int_distribution<Index>(2, 16)(rng);
        const Index Omega = std::uniform_int_distribution<Index>(1, 8)(rng);
        const Index W = Omega * std::uniform_int_distribution<Index>(1, 6)(rng);
        const Index R = std::uniform_int_distribution<Index>(1, std::min(M, W))(rng);
        const Matrix X = gaussian(M, R, rng) * gaussian(R, W, rng);
        const CoherenceReport c = compute_coherences(X, Omega);
        const double m = static_cast<double>(M), w = static_cast<double>(W), rr = static_cast<double>(c.rank);
        const bool ok = c.mu1_sq >= 1 - slack && c.mu1_sq <= m / rr + slack && c.mu2_sq >= 1 - slack &&
                        c.mu2_sq <= w / rr + slack && c.mu3_sq && *c.mu3_sq >= 1 - slack &&
                        *c.mu3_sq <= m * w / rr + slack;
        if (!ok) ++violations;
    }
    r.passed = violations == 0;
    r.detail = std::to_string(violations) + " violations in " + std::to_string(count) + " matrices";
    return r;
}

CheckResult check_spike_coherence() {
    Matrix X = Matrix::Zero(4, 8);
    X(0, 0) = 1.0;
    const CoherenceReport c = compute_coherences(X, 4);
    const bool ok = c.mu1_sq == 4.0 && c.mu2_sq == 8.0 && c.mu0_sq == 32.0 && c.mu3_sq && *c.mu3_sq == 16.0;
    std::ostringstream d;
    d << "mu1^2=" << c.mu1_sq << " mu2^2=" << c.mu2_sq << " mu0^2=" << c.mu0_sq
      << " mu3^2=" << (c.mu3_sq ? *c.mu3_sq : -1.0);
    return {"spike-coherence", ok, d.str()};
}

CheckResult check_lemma(Index M, Index W, Index R, Index Omega, Index draws, std::uint64_t seed) {
    const Matrix U = Matrix::Identity(M, R);
    const Matrix V = Matrix::Identity(W, R);
    const LemmaCheckResult res = lemma_check(U, V, Omega, draws, seed);
    bool ok = true;
    std::ostringstream d;
    d << "pass fractions";
    for (double f : res.pass_fraction) {
        ok = ok && f >= 0.95;
        d << ' ' << f;
    }
    return {"lemma-coherence", ok, d.str()};
}

CheckResult check_svt_oracle(Index count, std::uint64_t seed) {
    double worst = 0.0;
    for (Index t = 0; t < count; ++t) {
        Rng rng = make_rng(seed, "svt_oracle", static_cast<std::uint64_t>(t));
        const Index rows = std::uniform_int_distribution<Index>(2, 9)(rng);
        const Index cols = std::uniform_int_distribution<Index>(rows, 12)(rng);
        const Matrix Y = gaussian(rows, cols, rng);
        const double tau = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        worst = std::max(worst, (svt(Y, tau) - svt_via_gram(Y, tau)).norm() / std::max(Y.norm(), 1.0));
    }
    return {"svt-oracle", worst <= 1e-9, "max relative difference " + sci(worst)};
}

CheckResult check_klt_prox(Index count, std::uint64_t seed) {
    double worst = 0.0;
    for (Index t = 0; t < count; ++t) {
        const auto draw = static_cast<std::uint64_t>(t);
        const MeasurementOperator op({Architecture::RandomDemodulator, 4, 8, 4, derive_seed(seed, "klt_op", draw)});
        Rng rng = make_rng(seed, "klt_y", draw);
        const Vector y = gaussian(op.measurements(), 1, rng);
        const double lambda = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
        const Matrix closed = klt_estimate(op, y, lambda).X_hat;

        // Proximal gradient on ||X||^2 - 2<y, A(X)> + lambda ||X||_* with step 0.1.
        const Matrix Aty = op.adjoint(y);
        constexpr double step = 0.1;
        Matrix X = Matrix::Zero(4, 8);
        for (int it = 0; it < 400; ++it) X = svt_via_gram(X - step * (2.0 * X - 2.0 * Aty), step * lambda);
        worst = std::max(worst, (X - closed).norm());
    }
    return {"klt-closed-form", worst <= 1e-6, "max Frobenius gap " + sci(worst)};
}

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, Fault fault) {
    std::vector<CheckResult> out;
    for (auto arch : {Architecture::RandomSampling, Architecture::RandomDemodulator,
                      Architecture::UniversalSampling, Architecture::UniversalDemodulator})
        out.push_back(check_adjoint(arch, 8, 32, 8, 100, derive_seed(seed, "adjoint"), fault));
    out.push_back(check_operator_norm(4, 4, 2, derive_seed(seed, "norm", 0)));
    out.push_back(check_operator_norm(4, 16, 4, derive_seed(seed, "norm", 1)));
    out.push_back(check_operator_norm(2, 128, 32, derive_seed(seed, "norm", 2)));
    out.push_back(check_expectation_identity(4, 16, 4, 10000, derive_seed(seed, "expectation")));
    out.push_back(check_mask_projector(6, 20, 7, derive_seed(seed, "mask")));
    out.push_back(check_orthogonal_preprocessing(16, 33, derive_seed(seed, "orthogonal")));
    out.push_back(check_coherence_bounds(200, derive_seed(seed, "coherence")));
    out.push_back(check_spike_coherence());
    out.push_back(check_lemma(64, 64, 4, 16, 100, derive_seed(seed, "lemma")));
    out.push_back(check_svt_oracle(50, derive_seed(seed, "svt")));
    out.push_back(check_klt_prox(5, derive_seed(seed, "klt")));
    return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    Index failed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        if (!r.passed) ++failed;
    }
    os << (failed == 0 ? "all " + std::to_string(results.size()) + " invariants hold"
                       : std::to_string(failed) + " of " + std::to_string(results.size()) + " invariants failed")
       << '\n';
    return os.str();
}

} // namespace corrsamp
