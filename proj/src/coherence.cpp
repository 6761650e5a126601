#include "corrsamp/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "corrsamp/diversify.hpp"
#include "corrsamp/sampling_ops.hpp"
#include "corrsamp/seeding.hpp"
#include "corrsamp/signal_model.hpp"

namespace corrsamp {

namespace {

double max_block_energy(const Matrix& UVt, const BlockPartition& part) {
    double best = 0.0;
    const Index b = part.block_size();
    for (Index i = 0; i < UVt.rows(); ++i)
        for (Index j = 0; j < part.rate; ++j)
            best = std::max(best, UVt.row(i).segment(part.begin(j), b).squaredNorm());
    return best;
}

void check_orthonormal(const Matrix& Q, const char* what) {
    const Index R = Q.cols();
    if ((Q.transpose() * Q - Matrix::Identity(R, R)).norm() > 1e-8)
        throw ParameterError(std::string(what) + " must have orthonormal columns");
}

} // namespace

CoherenceReport coherences_from_factors(const Matrix& U, const Matrix& V, Index omega) {
    require_dims(U.cols() == V.cols() && U.cols() >= 1, "coherences: U and V must share R >= 1 columns");
    const double M = static_cast<double>(U.rows());
    const double W = static_cast<double>(V.rows());
    const double R = static_cast<double>(U.cols());
    const Matrix UVt = U * V.transpose();

    CoherenceReport rep;
    rep.rank = U.cols();
    rep.mu1_sq = M / R * U.rowwise().squaredNorm().maxCoeff();
    rep.mu2_sq = W / R * V.rowwise().squaredNorm().maxCoeff();
    rep.entry_term = M * W / R * UVt.cwiseAbs2().maxCoeff();
    rep.mu0_sq = std::max({rep.mu1_sq, rep.mu2_sq, rep.entry_term});
    if (omega > 0 && V.rows() % omega == 0) {
        const BlockPartition part = make_partition(V.rows(), omega);
        rep.omega = omega;
        rep.mu3_sq = M * static_cast<double>(omega) / R * max_block_energy(UVt, part);
    }
    return rep;
}

CoherenceReport compute_coherences(const Matrix& X, Index omega, double rank_tol) {
    if (X.size() == 0 || X.cwiseAbs().maxCoeff() == 0.0)
        throw UndefinedError("coherence is undefined for the zero matrix");
    const LowRankFactors f = truncated_svd(X, rank_tol);
    return coherences_from_factors(f.U, f.V, omega);
}

LemmaStatistics lemma_statistics(const Matrix& Up, const Matrix& Vp, Index omega) {
    const Matrix UVt = Up * Vp.transpose();
    LemmaStatistics s;
    s.row_u = Up.rowwise().squaredNorm().maxCoeff();
    s.row_v = Vp.rowwise().squaredNorm().maxCoeff();
    s.entry = UVt.cwiseAbs2().maxCoeff();
    s.block = max_block_energy(UVt, make_partition(Vp.rows(), omega));
    return s;
}

std::array<double, 4> lemma_bounds(Index M, Index W, Index R, Index omega, double C) {
    const double m = static_cast<double>(M), w = static_cast<double>(W);
    const double r = static_cast<double>(R), o = static_cast<double>(omega);
    const double spread_m = std::max(r, std::log(m));
    const double spread_w = std::max(r, std::log(w));
    return {C * spread_m / m, C * spread_w / w, C * std::log(w) * spread_m / (m * w),
            C * std::log(w) * spread_m / (m * o)};
}

LemmaCheckResult lemma_check(const Matrix& U, const Matrix& V, Index omega, Index draws,
                             std::uint64_t seed, double C, bool identity_preprocessing) {
    require(draws >= 1, "lemma_check: need at least one draw");
    require_dims(U.cols() == V.cols(), "lemma_check: U and V must share R columns");
    check_orthonormal(U, "lemma_check: U");
    check_orthonormal(V, "lemma_check: V");
    const Index M = U.rows(), W = V.rows(), R = U.cols();
    const auto bounds = lemma_bounds(M, W, R, omega, C);

    std::array<Index, 4> passed{};
    for (Index t = 0; t < draws; ++t) {
        Matrix Up = U, Vp = V;
        if (!identity_preprocessing) {
            const auto draw = static_cast<std::uint64_t>(t);
            const Mixer A = gen_mixer(M, derive_seed(seed, "lemma_avmm", draw));
            const FilterSpectrum H = gen_filter(W, derive_seed(seed, "lemma_lti", draw));
            Up = A.A * U;
            // Columns of V are filtered: (H V)^T = V^T H^T, i.e. filter the rows of V^T.
            Vp = apply_filter(V.transpose(), H).transpose();
        }
        const LemmaStatistics s = lemma_statistics(Up, Vp, omega);
        const std::array<double, 4> values{s.row_u, s.row_v, s.entry, s.block};
        for (int b = 0; b < 4; ++b)
            if (values[b] <= bounds[b]) ++passed[b];
    }
    LemmaCheckResult out;
    out.draws = draws;
    for (int b = 0; b < 4; ++b)
        out.pass_fraction[b] = static_cast<double>(passed[b]) / static_cast<double>(draws);
    return out;
}

} // namespace corrsamp
