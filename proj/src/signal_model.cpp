#include "corrsamp/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "corrsamp/seeding.hpp"
#include "dft.hpp"

namespace corrsamp {

SampleMatrix synth_from_fourier(const FourierCoeffs& coeffs) {
    const Index W = coeffs.width();
    require(W >= 1 && W % 2 == 1, "synth_from_fourier: W must be odd (W = 2B+1)");
    const Index B = coeffs.band();

    CMatrix spectrum(coeffs.channels(), W);
    for (Index k = -B; k <= B; ++k)
        spectrum.col(detail::dft_slot(k, W)) = coeffs.coeffs.col(k + B);

    const CMatrix x = detail::idft_rows(spectrum) * std::sqrt(static_cast<double>(W));

    const double norm = coeffs.coeffs.norm();
    const double residue = x.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8 * norm)
        throw SymmetryError("synth_from_fourier: coefficients are not conjugate symmetric");
    return x.real();
}

FourierCoeffs fourier_from_samples(const SampleMatrix& X) {
    const Index W = X.cols();
    require(W % 2 == 1, "fourier_from_samples: W must be odd");
    const Index B = (W - 1) / 2;
    const CMatrix spectrum = detail::dft_rows(X.cast<cplx>()) / std::sqrt(static_cast<double>(W));
    FourierCoeffs out{CMatrix(X.rows(), W)};
    for (Index k = -B; k <= B; ++k) out.coeffs.col(k + B) = spectrum.col(detail::dft_slot(k, W));
    return out;
}

FourierCoeffs random_symmetric_coeffs(Index rows, Index band, std::uint64_t seed) {
    require(rows >= 1 && band >= 0, "random_symmetric_coeffs: bad dimensions");
    const Index W = 2 * band + 1;
    FourierCoeffs out{CMatrix::Zero(rows, W)};
    std::normal_distribution<double> normal;
    const double half = std::sqrt(0.5);
    for (Index m = 0; m < rows; ++m) {
        Rng rng = make_rng(seed, "fourier_row", static_cast<std::uint64_t>(m));
        out.coeffs(m, band) = normal(rng);
        for (Index k = 1; k <= band; ++k) {
            const double re = normal(rng), im = normal(rng);
            const cplx a(half * re, half * im);
            out.coeffs(m, band + k) = a;
            out.coeffs(m, band - k) = std::conj(a);
        }
    }
    return out;
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal;
    Matrix G(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) G(i, j) = normal(rng);
    return G;
}

} // namespace

SampleMatrix gen_lowrank_gaussian(Index M, Index W, Index R, std::uint64_t seed) {
    require(M >= 1 && W >= 1, "gen_lowrank_gaussian: dimensions must be positive");
    require(R >= 1 && R <= std::min(M, W), "gen_lowrank_gaussian: rank must lie in [1, min(M, W)]");
    Rng left = make_rng(seed, "lowrank_left");
    Rng right = make_rng(seed, "lowrank_right");
    const Matrix G1 = gaussian_matrix(M, R, left);
    const Matrix G2 = gaussian_matrix(R, W, right);
    return G1 * G2;
}

CorrelatedEnsemble gen_correlated_bandlimited(const Matrix& mixing, Index band,
                                              std::uint64_t seed) {
    require(mixing.rows() >= 1 && mixing.cols() >= 1, "gen_correlated_bandlimited: empty mixing");
    require(band >= 0, "gen_correlated_bandlimited: negative band");
    const FourierCoeffs latent =
        random_symmetric_coeffs(mixing.cols(), band, derive_seed(seed, "latent"));
    FourierCoeffs C{mixing.cast<cplx>() * latent.coeffs};
    SampleMatrix X = synth_from_fourier(C);
    return {std::move(X), std::move(C)};
}

SampleMatrix gen_spike_ensemble(Index M, Index W, Index R, Index burst_len, std::uint64_t seed) {
    require(R >= 1 && R <= M, "gen_spike_ensemble: rank must lie in [1, M]");
    require(burst_len >= 1 && burst_len <= W, "gen_spike_ensemble: burst length out of range");
    Rng rng = make_rng(seed, "spike");
    std::vector<Index> channels(M);
    std::iota(channels.begin(), channels.end(), Index{0});
    for (Index r = 0; r < R; ++r) {
        std::uniform_int_distribution<Index> pick(r, M - 1);
        std::swap(channels[r], channels[pick(rng)]);
    }
    std::uniform_int_distribution<Index> start_of(0, W - burst_len);
    std::normal_distribution<double> normal;
    SampleMatrix X = SampleMatrix::Zero(M, W);
    for (Index r = 0; r < R; ++r) {
        const Index start = start_of(rng);
        for (Index n = 0; n < burst_len; ++n) X(channels[r], start + n) = normal(rng);
    }
    return X;
}

Vector array_positions(Index M, double carrier) {
    require(M >= 1 && carrier > 0, "array_positions: need M >= 1 and a positive carrier");
    const double spacing = kSpeedOfLight / (2.0 * carrier);
    const double center = 0.5 * static_cast<double>(M - 1);
    Vector d(M);
    for (Index m = 0; m < M; ++m) d(m) = (static_cast<double>(m) - center) * spacing;
    return d;
}

SteeringVector steering(double theta, double f, Index M, double carrier) {
    SteeringVector sv;
    sv.theta = theta;
    sv.f = f;
    sv.positions = array_positions(M, carrier);
    sv.a.resize(M);
    const double s = std::sin(theta);
    for (Index m = 0; m < M; ++m) {
        const double phase = -2.0 * kPi * f * sv.positions(m) * s / kSpeedOfLight;
        sv.a(m) = std::polar(1.0, phase);
    }
    return sv;
}

CMatrix build_Raa(double theta, double carrier, double bandwidth, Index M, Index quad_points) {
    require(bandwidth > 0, "build_Raa: bandwidth must be positive");
    require(quad_points >= 64, "build_Raa: need at least 64 quadrature points");
    const double df = bandwidth / static_cast<double>(quad_points);
    CMatrix R = CMatrix::Zero(M, M);
    for (Index q = 0; q < quad_points; ++q) {
        const double f = carrier - 0.5 * bandwidth + (static_cast<double>(q) + 0.5) * df;
        const CVector a = steering(theta, f, M, carrier).a;
        R.noalias() += (a * a.adjoint()) * df;
    }
    return R;
}

Vector hermitian_eigenvalues(const CMatrix& H) {
    const Index n = H.rows();
    require_dims(H.cols() == n, "hermitian_eigenvalues: matrix must be square");
    Matrix E(2 * n, 2 * n);
    E.topLeftCorner(n, n) = H.real();
    E.topRightCorner(n, n) = -H.imag();
    E.bottomLeftCorner(n, n) = H.imag();
    E.bottomRightCorner(n, n) = H.real();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(E, Eigen::EigenvaluesOnly);
    const Vector& ascending = eig.eigenvalues();
    // Each eigenvalue appears twice; keep one of every adjacent pair.
    Vector out(n);
    for (Index i = 0; i < n; ++i) out(i) = ascending(2 * n - 1 - 2 * i);
    return out;
}

Index effective_rank(std::span<const double> eigs, double ratio) {
    require(!eigs.empty(), "effective_rank: empty eigenvalue list");
    require(ratio > 0, "effective_rank: ratio must be positive");
    const double floor = eigs.front() / ratio;
    return static_cast<Index>(
        std::count_if(eigs.begin(), eigs.end(), [floor](double e) { return e >= floor; }));
}

LowRankFactors truncated_svd(const Matrix& X, double rank_tol) {
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    Index r = 0;
    if (s.size() > 0 && s(0) > 0)
        while (r < s.size() && s(r) >= rank_tol * s(0)) ++r;
    return {svd.matrixU().leftCols(r), s.head(r), svd.matrixV().leftCols(r)};
}

WhitenResult whiten_known(const Matrix& U, const SampleMatrix& X) {
    require_dims(U.rows() == X.rows(), "whiten_known: U and X row counts differ");
    const Index R = U.cols();
    const double orth = (U.transpose() * U - Matrix::Identity(R, R)).norm();
    require(orth <= 1e-8, "whiten_known: U must have orthonormal columns");
    Matrix Y = U.transpose() * X;
    SampleMatrix X_hat = U * Y;
    return {std::move(Y), std::move(X_hat)};
}

} // namespace corrsamp
