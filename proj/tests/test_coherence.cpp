#include <doctest.h>

#include "corrsamp/coherence.hpp"
#include "corrsamp/signal_model.hpp"
#include "oracles.hpp"

using namespace corrsamp;

namespace {

// Coherences straight from the definitions, with U, V from a Jacobi SVD.
struct Direct {
    double mu1, mu2, mu3, entry;
};

Direct direct_coherences(const Matrix& X, Index R, Index omega) {
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix U = svd.matrixU().leftCols(R), V = svd.matrixV().leftCols(R);
    const double M = X.rows(), W = X.cols(), r = static_cast<double>(R);
    Direct d{0, 0, 0, 0};
    for (Index i = 0; i < X.rows(); ++i) d.mu1 = std::max(d.mu1, U.row(i).squaredNorm());
    for (Index k = 0; k < X.cols(); ++k) d.mu2 = std::max(d.mu2, V.row(k).squaredNorm());
    const Matrix P = U * V.transpose();
    const Index b = X.cols() / omega;
    for (Index i = 0; i < X.rows(); ++i)
        for (Index j = 0; j < omega; ++j) {
            double s = 0.0;
            for (Index k = j * b; k < (j + 1) * b; ++k) s += P(i, k) * P(i, k);
            d.mu3 = std::max(d.mu3, s);
            for (Index k = j * b; k < (j + 1) * b; ++k) d.entry = std::max(d.entry, P(i, k) * P(i, k));
        }
    d.mu1 *= M / r;
    d.mu2 *= W / r;
    d.mu3 *= M * static_cast<double>(omega) / r;
    d.entry *= M * W / r;
    return d;
}

} // namespace

TEST_CASE("spike coherences") {
    Matrix X = Matrix::Zero(4, 8);
    X(0, 0) = 1.0;
    const CoherenceReport c = compute_coherences(X, 4);
    CHECK(c.rank == 1);
    CHECK(c.mu1_sq == 4.0);
    CHECK(c.mu2_sq == 8.0);
    CHECK(c.entry_term == 32.0);
    CHECK(c.mu0_sq == 32.0);
    REQUIRE(c.mu3_sq.has_value());
    CHECK(*c.mu3_sq == 16.0);
}

TEST_CASE("flat rank-one matrix has unit coherences") {
    const Matrix X = Matrix::Constant(6, 12, 1.0 / std::sqrt(72.0));
    const CoherenceReport c = compute_coherences(X, 3);
    CHECK(c.mu1_sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mu2_sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*c.mu3_sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mu0_sq == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mu3 only when omega divides W") {
    const SampleMatrix X = gen_lowrank_gaussian(5, 12, 2, 1);
    CHECK_FALSE(compute_coherences(X, 5).mu3_sq.has_value());
    CHECK_FALSE(compute_coherences(X).mu3_sq.has_value());
    CHECK(compute_coherences(X, 6).mu3_sq.has_value());
}

TEST_CASE("zero matrix is undefined") {
    CHECK_THROWS_AS(compute_coherences(Matrix::Zero(3, 4)), UndefinedError);
}

TEST_CASE("coherences match the definitions") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SampleMatrix X = gen_lowrank_gaussian(7, 24, 3, seed);
        const CoherenceReport c = compute_coherences(X, 6);
        const Direct d = direct_coherences(X, 3, 6);
        CHECK(c.mu1_sq == doctest::Approx(d.mu1).epsilon(1e-10));
        CHECK(c.mu2_sq == doctest::Approx(d.mu2).epsilon(1e-10));
        CHECK(*c.mu3_sq == doctest::Approx(d.mu3).epsilon(1e-10));
        CHECK(c.entry_term == doctest::Approx(d.entry).epsilon(1e-10));
        CHECK(c.mu0_sq == doctest::Approx(std::max({d.mu1, d.mu2, d.entry})).epsilon(1e-10));
    }
}

TEST_CASE("property: analytic coherence bounds over 200 random matrices") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Index M = 2 + static_cast<Index>(seed % 11);
        const Index omega = 1 + static_cast<Index>(seed % 5);
        const Index W = omega * (1 + static_cast<Index>(seed % 7));
        const Index R = 1 + static_cast<Index>(seed % std::min(M, W));
        const SampleMatrix X = oracle::gaussian(M, R, seed) * oracle::gaussian(R, W, seed + 500);
        const CoherenceReport c = compute_coherences(X, omega);
        const double m = M, w = W, r = static_cast<double>(c.rank);
        constexpr double slack = 1e-9;
        CHECK(c.mu1_sq >= 1 - slack);
        CHECK(c.mu1_sq <= m / r + slack);
        CHECK(c.mu2_sq >= 1 - slack);
        CHECK(c.mu2_sq <= w / r + slack);
        CHECK(*c.mu3_sq >= 1 - slack);
        CHECK(*c.mu3_sq <= m * w / r + slack);
        // Summing the block energies over j recovers the row energy.
        CHECK(static_cast<double>(omega) * *c.mu3_sq >= static_cast<double>(omega) * c.mu1_sq - slack);
    }
}

TEST_CASE("property: gauge invariance for distinct singular values") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SampleMatrix X = gen_lowrank_gaussian(6, 18, 3, seed);
        const LowRankFactors f = truncated_svd(X);
        const Matrix Q = gen_lowrank_gaussian(3, 3, 3, seed + 99).householderQr().householderQ();
        const CoherenceReport a = coherences_from_factors(f.U, f.V, 6);
        const CoherenceReport b = coherences_from_factors(f.U * Q, f.V * Q, 6);
        CHECK(std::abs(a.mu1_sq - b.mu1_sq) <= 1e-10 * a.mu1_sq);
        CHECK(std::abs(a.mu2_sq - b.mu2_sq) <= 1e-10 * a.mu2_sq);
        CHECK(std::abs(*a.mu3_sq - *b.mu3_sq) <= 1e-10 * *a.mu3_sq);
        CHECK(std::abs(a.mu0_sq - b.mu0_sq) <= 1e-10 * a.mu0_sq);
    }
}

TEST_CASE("lemma bounds formula") {
    const auto b = lemma_bounds(64, 64, 4, 16, 10.0);
    const double l = std::log(64.0);
    CHECK(b[0] == doctest::Approx(10.0 * std::max(4.0, l) / 64));
    CHECK(b[1] == doctest::Approx(10.0 * std::max(4.0, l) / 64));
    CHECK(b[2] == doctest::Approx(10.0 * l * std::max(4.0, l) / (64.0 * 64.0)));
    CHECK(b[3] == doctest::Approx(10.0 * l * std::max(4.0, l) / (64.0 * 16.0)));
}

TEST_CASE("lemma check on maximally coherent inputs") {
    const Matrix U = Matrix::Identity(64, 4), V = Matrix::Identity(64, 4);
    SUBCASE("preprocessing brings every statistic under its bound") {
        const LemmaCheckResult r = lemma_check(U, V, 16, 100, 1);
        CHECK(r.draws == 100);
        for (double f : r.pass_fraction) CHECK(f >= 0.95);
    }
    SUBCASE("without preprocessing the first three bounds fail") {
        const LemmaCheckResult r = lemma_check(U, V, 16, 100, 1, 10.0, true);
        CHECK(r.pass_fraction[0] == 0.0);
        CHECK(r.pass_fraction[1] == 0.0);
        CHECK(r.pass_fraction[2] == 0.0);
    }
    SUBCASE("square U always meets bound one") {
        const Matrix Uf = Matrix::Identity(8, 8), Vf = Matrix::Identity(64, 8);
        CHECK(lemma_check(Uf, Vf, 16, 100, 2).pass_fraction[0] == 1.0);
    }
    SUBCASE("non-orthonormal input is rejected") {
        CHECK_THROWS_AS(lemma_check(2.0 * U, V, 16, 100, 1), ParameterError);
    }
}

TEST_CASE("lemma statistics by hand") {
    const Matrix U = Matrix::Identity(4, 1), V = Matrix::Identity(8, 1);
    const LemmaStatistics s = lemma_statistics(U, V, 4);
    CHECK(s.row_u == 1.0);
    CHECK(s.row_v == 1.0);
    CHECK(s.entry == 1.0);
    CHECK(s.block == 1.0);
}
