#include <doctest.h>

#include "corrsamp/diversify.hpp"
#include "oracles.hpp"

using namespace corrsamp;

TEST_CASE("modulator bank entries are +-1 and reproducible") {
    const ModulatorBank b = gen_modulator_bank(5, 33, 12);
    for (Index i = 0; i < 5; ++i)
        for (Index k = 0; k < 33; ++k) CHECK((b.signs(i, k) == 1.0 || b.signs(i, k) == -1.0));
    CHECK(gen_modulator_bank(5, 33, 12).signs == b.signs);
    CHECK(gen_modulator_bank(5, 33, 13).signs != b.signs);
    // Channels are independent streams: a taller bank extends a shorter one.
    CHECK(gen_modulator_bank(7, 33, 12).signs.topRows(5) == b.signs);
}

TEST_CASE("modulator bank mean concentrates") {
    const ModulatorBank b = gen_modulator_bank(1, 10000, 1);
    CHECK(std::abs(b.signs.mean()) <= 0.05);
}

TEST_CASE("filter spectrum: unit modulus, conjugate symmetry, real impulse response") {
    for (Index W : {2, 3, 4, 7, 8, 64, 129}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const FilterSpectrum h = gen_filter(W, seed);
            REQUIRE(h.width() == W);
            CHECK(std::abs(h.gains(0).imag()) == 0.0);
            CHECK(std::abs(std::abs(h.gains(0).real()) - 1.0) == 0.0);
            if (W % 2 == 0) {
                CHECK(h.gains(W / 2).imag() == 0.0);
                CHECK(std::abs(h.gains(W / 2).real()) == 1.0);
            }
            for (Index w = 0; w < W; ++w) {
                CHECK(std::abs(std::abs(h.gains(w)) - 1.0) <= 1e-14);
                CHECK(h.gains((W - w) % W) == std::conj(h.gains(w)));
            }
            const Eigen::VectorXcd t = oracle::idft(h.gains);
            CHECK(t.imag().cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((impulse_response(h) - t.real()).norm() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(gen_filter(1, 0), ParameterError);
}

TEST_CASE("apply_filter equals the explicit circulant matrix for every W <= 8") {
    for (Index W = 2; W <= 8; ++W) {
        const FilterSpectrum h = gen_filter(W, static_cast<std::uint64_t>(W));
        const Matrix H = oracle::circulant(oracle::idft(h.gains).real());
        const Matrix X = oracle::gaussian(3, W, 50 + static_cast<std::uint64_t>(W));
        CHECK((apply_filter(X, h) - X * H.transpose()).norm() <= 1e-12 * X.norm());
        CHECK((apply_filter_adjoint(X, h) - X * H).norm() <= 1e-12 * X.norm());
        CHECK((H.transpose() * H - Matrix::Identity(W, W)).norm() <= 1e-12);
    }
}

TEST_CASE("apply_filter: identity spectrum and row norms") {
    const Matrix X = oracle::gaussian(4, 31, 2);
    FilterSpectrum one{CVector::Ones(31), 0};
    CHECK((apply_filter(X, one) - X).norm() <= 1e-13 * X.norm());
    const SampleMatrix Y = apply_filter(X, gen_filter(31, 5));
    for (Index i = 0; i < 4; ++i) CHECK(Y.row(i).norm() == doctest::Approx(X.row(i).norm()).epsilon(1e-10));
    CHECK_THROWS_AS(apply_filter(X, gen_filter(30, 5)), DimensionError);
}

TEST_CASE("mixer is orthogonal") {
    for (Index M : {1, 2, 16, 64}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Mixer A = gen_mixer(M, seed);
            CHECK((A.A.transpose() * A.A - Matrix::Identity(M, M)).norm() <= 1e-10);
        }
    }
    const double a = gen_mixer(1, 3).A(0, 0);
    CHECK((a == 1.0 || a == -1.0));
}

TEST_CASE("mixer spreads a spike's energy") {
    const Index M = 64;
    const double bound = 10.0 * std::log(static_cast<double>(M)) / static_cast<double>(M);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        if (gen_mixer(M, seed).A.col(0).cwiseAbs2().maxCoeff() <= bound) ++ok;
    CHECK(ok >= 198);
}

TEST_CASE("mixer first column is uniform on the sphere in distribution") {
    // Haar invariance: E[A(0,0)^2] = 1/M and E[A(0,0)^4] = 3/(M(M+2)).
    const Index M = 8, draws = 20000;
    double m2 = 0.0, m4 = 0.0;
    for (Index t = 0; t < draws; ++t) {
        const double a = gen_mixer(M, static_cast<std::uint64_t>(t)).A(0, 0);
        m2 += a * a;
        m4 += a * a * a * a;
    }
    m2 /= draws;
    m4 /= draws;
    CHECK(m2 == doctest::Approx(1.0 / M).epsilon(0.03));
    CHECK(m4 == doctest::Approx(3.0 / (M * (M + 2.0))).epsilon(0.06));
}

TEST_CASE("preprocess is an isometry") {
    const Matrix X = oracle::gaussian(6, 17, 4) * 0.5;
    SUBCASE("identity transforms") {
        const Mixer I{Matrix::Identity(6, 6), 0};
        const FilterSpectrum one{CVector::Ones(17), 0};
        CHECK((preprocess(X, I, one) - X).norm() <= 1e-13 * X.norm());
    }
    SUBCASE("singular values are preserved") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Matrix Xp = preprocess(X, gen_mixer(6, seed), gen_filter(17, seed));
            Eigen::JacobiSVD<Matrix> a(X), b(Xp);
            CHECK((a.singularValues() - b.singularValues()).norm() <= 1e-10 * a.singularValues().norm());
        }
    }
    SUBCASE("adjoint inverts") {
        const Mixer A = gen_mixer(6, 1);
        const FilterSpectrum h = gen_filter(17, 1);
        CHECK((preprocess_adjoint(preprocess(X, A, h), A, h) - X).norm() <= 1e-12 * X.norm());
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(preprocess(X, gen_mixer(5, 1), gen_filter(17, 1)), DimensionError);
    }
}

TEST_CASE("lowpass gains") {
    SUBCASE("DC entry") { CHECK(lowpass_gains(9).L(0) == cplx(1.0 / 9.0, 0.0)); }
    SUBCASE("modulus at W = 5") {
        const LowpassGains g = lowpass_gains(5);
        for (Index w = -2; w <= 2; ++w) {
            if (w == 0) continue;
            const double want = std::abs(std::sin(oracle::pi * w / 5.0)) / (oracle::pi * std::abs(w));
            CHECK(std::abs(std::abs(g.L(w >= 0 ? w : w + 5)) - want) <= 1e-14);
        }
    }
    SUBCASE("DFT ordering") {
        const LowpassGains g = lowpass_gains(7);
        for (Index w = 1; w <= 3; ++w) {
            const cplx want = (std::polar(1.0, 2.0 * oracle::pi * w / 7.0) - 1.0) / cplx(0.0, 2.0 * oracle::pi * w);
            CHECK(std::abs(g.L(w) - want) <= 1e-15);
            CHECK(std::abs(g.L(7 - w) - std::conj(want)) <= 1e-15);
        }
    }
    SUBCASE("condition ratio at W = 1025") {
        const double ratio = lowpass_gains(1025).condition_ratio();
        CHECK(std::isfinite(ratio));
        CHECK(ratio <= oracle::pi / 2 + 1e-3);
    }
    SUBCASE("no zero entries for odd W <= 4097") {
        for (Index W = 1; W <= 4097; W += 2) CHECK(lowpass_gains(W).L.cwiseAbs().minCoeff() > 0.0);
    }
    SUBCASE("even W rejected") { CHECK_THROWS_AS(lowpass_gains(8), ParameterError); }
}

TEST_CASE("integrator model samples are integrals of the continuous signal") {
    const FourierCoeffs C = random_symmetric_coeffs(3, 4, 8);
    const SampleMatrix X0 = apply_integrator_model(C);
    const Matrix ref = oracle::integrated_samples(C.coeffs, 256);
    CHECK((X0 - ref).norm() <= 1e-9 * ref.norm());
}

TEST_CASE("integrator model: zero, rank and undo") {
    CHECK(apply_integrator_model(FourierCoeffs{CMatrix::Zero(3, 11)}).norm() == 0.0);

    const Matrix mixing = oracle::gaussian(10, 2, 3);
    const CorrelatedEnsemble e = gen_correlated_bandlimited(mixing, 12, 3);
    const SampleMatrix X0 = apply_integrator_model(e.C);
    Eigen::JacobiSVD<Matrix> svd(X0);
    CHECK(svd.singularValues()(2) <= 1e-10 * svd.singularValues()(0));

    const FourierCoeffs back = undo_integrator_model(X0);
    CHECK((back.coeffs - e.C.coeffs).norm() <= 1e-10 * e.C.coeffs.norm());
}
