#pragma once

#include <cstdint>
#include <span>

#include "corrsamp/common.hpp"

namespace corrsamp {

/// Fourier-series coefficients of an ensemble of real, periodic, bandlimited signals.
///
/// `coeffs` is M x W with W = 2B+1; column `k + B` holds frequency k in {-B..B}.
/// Real signals require alpha_m[-k] = conj(alpha_m[k]).
struct FourierCoeffs {
    CMatrix coeffs;

    Index channels() const { return coeffs.rows(); }
    Index width() const { return coeffs.cols(); }
    Index band() const { return (coeffs.cols() - 1) / 2; }
    cplx at(Index m, Index k) const { return coeffs(m, k + band()); }
};

/// Thin SVD factors X = U diag(S) V^T truncated to the numerical rank.
struct LowRankFactors {
    Matrix U;
    Vector S;
    Matrix V;

    Index rank() const { return S.size(); }
};

struct SteeringVector {
    CVector a;
    double theta = 0.0;
    double f = 0.0;
    Vector positions;
};

struct CorrelatedEnsemble {
    SampleMatrix X;
    FourierCoeffs C;
};

struct WhitenResult {
    Matrix Y;
    SampleMatrix X_hat;
};

/// X = C F^H with the unitary DFT: X[m,n] = W^{-1/2} sum_k alpha_m[k] e^{j 2 pi k n / W}.
/// Throws SymmetryError when the synthesized signal is not real to 1e-8 ||C||_F.
SampleMatrix synth_from_fourier(const FourierCoeffs& coeffs);

/// Inverse of synth_from_fourier (C = X F). Requires odd W.
FourierCoeffs fourier_from_samples(const SampleMatrix& X);

/// Random conjugate-symmetric coefficients: real Gaussian DC, complex Gaussian for k > 0.
FourierCoeffs random_symmetric_coeffs(Index rows, Index band, std::uint64_t seed);

/// Product of an M x R and an R x W standard Gaussian matrix.
SampleMatrix gen_lowrank_gaussian(Index M, Index W, Index R, std::uint64_t seed);

/// R latent bandlimited signals mixed pointwise: x_m = sum_r mixing(m, r) s_r.
CorrelatedEnsemble gen_correlated_bandlimited(const Matrix& mixing, Index band,
                                              std::uint64_t seed);

/// Coherent ensemble: R distinct channels, each carrying a Gaussian burst confined to
/// one block of `burst_len` consecutive samples. Rank R, maximally spiky.
SampleMatrix gen_spike_ensemble(Index M, Index W, Index R, Index burst_len, std::uint64_t seed);

/// Element positions of a centered uniform linear array spaced half a carrier wavelength.
Vector array_positions(Index M, double carrier);

/// a_m = exp(-j 2 pi f d_m sin(theta) / c).
SteeringVector steering(double theta, double f, Index M, double carrier);

/// Midpoint-rule approximation of the integral of a a^H over [f_c - bw/2, f_c + bw/2].
CMatrix build_Raa(double theta, double carrier, double bandwidth, Index M,
                  Index quad_points = 512);

/// Eigenvalues of a Hermitian matrix, nonincreasing. Computed through the real
/// symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum repeats each eigenvalue twice.
Vector hermitian_eigenvalues(const CMatrix& H);

/// Number of eigenvalues >= eigs[0] / ratio. `eigs` must be nonincreasing.
Index effective_rank(std::span<const double> eigs, double ratio);

/// Thin SVD truncated at singular values >= rank_tol * sigma_1.
LowRankFactors truncated_svd(const Matrix& X, double rank_tol = 1e-8);

/// Known-subspace acquisition: Y = U^T X, X_hat = U Y.
WhitenResult whiten_known(const Matrix& U, const SampleMatrix& X);

} // namespace corrsamp
