#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "corrsamp/common.hpp"

namespace corrsamp {

/// Coherence statistics of a low-rank matrix with thin SVD X = U S V^T.
///
///   mu1^2 = (M/R) max_i ||U^T e_i||^2
///   mu2^2 = (W/R) max_k ||V^T e_k||^2
///   mu3^2 = (M Omega / R) max_{i,j} sum_{k in B_j} (U V^T)_{ik}^2
///   mu0^2 = max(mu1^2, mu2^2, (M W / R) max_{ik} (U V^T)_{ik}^2)
///
/// mu3 is only reported when a block rate dividing W is given.
struct CoherenceReport {
    double mu0_sq = 0.0;
    double mu1_sq = 0.0;
    double mu2_sq = 0.0;
    std::optional<double> mu3_sq;
    double entry_term = 0.0; ///< (M W / R) ||U V^T||_inf^2, the third term of mu0^2
    Index rank = 0;
    Index omega = 0;
};

/// Coherences from explicit orthonormal singular-vector bases (M x R and W x R).
CoherenceReport coherences_from_factors(const Matrix& U, const Matrix& V, Index omega = 0);

/// SVD truncated at rank_tol * sigma_1, then coherences_from_factors.
/// Throws UndefinedError on the zero matrix.
CoherenceReport compute_coherences(const Matrix& X, Index omega = 0, double rank_tol = 1e-8);

/// The four preprocessed-coherence statistics for U_p = A U, V_p = H V.
struct LemmaStatistics {
    double row_u = 0.0;   ///< max_i ||U_p^T e_i||^2
    double row_v = 0.0;   ///< max_j ||V_p^T e_j||^2
    double entry = 0.0;   ///< max_{ij} (U_p V_p^T)_{ij}^2
    double block = 0.0;   ///< max_{i,j} sum_{k in B_j} (U_p V_p^T)_{ik}^2
};

LemmaStatistics lemma_statistics(const Matrix& Up, const Matrix& Vp, Index omega);

/// Bounds C max(R, log M)/M, C max(R, log W)/W, C log W max(R, log M)/(M W)
/// and C log W max(R, log M)/(M Omega).
std::array<double, 4> lemma_bounds(Index M, Index W, Index R, Index omega, double C);

struct LemmaCheckResult {
    std::array<double, 4> pass_fraction{};
    Index draws = 0;
};

/// Draws a Haar mixer A and a random circulant filter H per trial, forms
/// U_p = A U and V_p = H V, and reports the fraction of draws meeting each bound.
/// `identity_preprocessing` skips the random transforms (A = I, H = I).
LemmaCheckResult lemma_check(const Matrix& U, const Matrix& V, Index omega, Index draws,
                             std::uint64_t seed, double C = 10.0,
                             bool identity_preprocessing = false);

} // namespace corrsamp
