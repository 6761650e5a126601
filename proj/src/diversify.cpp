#include "corrsamp/diversify.hpp"

#include <cmath>
#include <random>

#include "corrsamp/seeding.hpp"
#include "dft.hpp"

namespace corrsamp {

ModulatorBank gen_modulator_bank(Index M, Index W, std::uint64_t seed) {
    require(M >= 1 && W >= 1, "gen_modulator_bank: dimensions must be positive");
    ModulatorBank bank{Matrix(M, W), seed};
    std::bernoulli_distribution coin(0.5);
    for (Index m = 0; m < M; ++m) {
        Rng rng = make_rng(seed, "modulator", static_cast<std::uint64_t>(m));
        for (Index n = 0; n < W; ++n) bank.signs(m, n) = coin(rng) ? 1.0 : -1.0;
    }
    return bank;
}

FilterSpectrum gen_filter(Index W, std::uint64_t seed) {
    require(W >= 2, "gen_filter: W must be at least 2");
    Rng rng = make_rng(seed, "filter");
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

    FilterSpectrum h{CVector(W), seed};
    h.gains(0) = coin(rng) ? 1.0 : -1.0;
    const Index half = (W - 1) / 2;
    for (Index w = 1; w <= half; ++w) {
        const cplx g = std::polar(1.0, angle(rng));
        h.gains(w) = g;
        h.gains(W - w) = std::conj(g);
    }
    if (W % 2 == 0) h.gains(W / 2) = coin(rng) ? 1.0 : -1.0;
    return h;
}

Vector impulse_response(const FilterSpectrum& h) {
    const CMatrix spec = h.gains.transpose();
    return detail::idft_rows(spec).row(0).real().transpose();
}

namespace {

SampleMatrix filter_rows(const SampleMatrix& X, const CVector& gains) {
    require_dims(X.cols() == gains.size(), "apply_filter: filter length differs from W");
    CMatrix spec = detail::dft_rows(X.cast<cplx>());
    spec.array().rowwise() *= gains.transpose().array();
    return detail::idft_rows(spec).real();
}

} // namespace

SampleMatrix apply_filter(const SampleMatrix& X, const FilterSpectrum& h) {
    return filter_rows(X, h.gains);
}

SampleMatrix apply_filter_adjoint(const SampleMatrix& X, const FilterSpectrum& h) {
    return filter_rows(X, h.gains.conjugate());
}

Mixer gen_mixer(Index M, std::uint64_t seed) {
    require(M >= 1, "gen_mixer: M must be positive");
    Rng rng = make_rng(seed, "mixer");
    std::normal_distribution<double> normal;
    Matrix G(M, M);
    for (Index j = 0; j < M; ++j)
        for (Index i = 0; i < M; ++i) G(i, j) = normal(rng);

    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(M, M);
    const Matrix& R = qr.matrixQR();
    for (Index i = 0; i < M; ++i)
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    return {std::move(Q), seed};
}

SampleMatrix preprocess(const SampleMatrix& X, const Mixer& A, const FilterSpectrum& h) {
    require_dims(A.channels() == X.rows(), "preprocess: mixer size differs from M");
    return A.A * apply_filter(X, h);
}

SampleMatrix preprocess_adjoint(const SampleMatrix& Y, const Mixer& A, const FilterSpectrum& h) {
    require_dims(A.channels() == Y.rows(), "preprocess_adjoint: mixer size differs from M");
    return apply_filter_adjoint(A.A.transpose() * Y, h);
}

LowpassGains lowpass_gains(Index W) {
    require(W >= 1 && W % 2 == 1, "lowpass_gains: W must be odd (W = 2B+1)");
    const Index B = (W - 1) / 2;
    const double Wd = static_cast<double>(W);
    LowpassGains out{CVector(W)};
    out.L(0) = 1.0 / Wd;
    const cplx j(0.0, 1.0);
    for (Index w = -B; w <= B; ++w) {
        if (w == 0) continue;
        const double x = 2.0 * kPi * static_cast<double>(w);
        out.L(detail::dft_slot(w, W)) = (std::exp(j * (x / Wd)) - 1.0) / (j * x);
    }
    return out;
}

SampleMatrix apply_integrator_model(const FourierCoeffs& C) {
    const Index W = C.width();
    const LowpassGains gains = lowpass_gains(W);
    const Index B = C.band();
    FourierCoeffs filtered{C.coeffs};
    for (Index k = -B; k <= B; ++k) filtered.coeffs.col(k + B) *= gains.L(detail::dft_slot(k, W));
    return synth_from_fourier(filtered);
}

FourierCoeffs undo_integrator_model(const SampleMatrix& X0) {
    const Index W = X0.cols();
    const LowpassGains gains = lowpass_gains(W);
    FourierCoeffs C = fourier_from_samples(X0);
    const Index B = C.band();
    for (Index k = -B; k <= B; ++k) C.coeffs.col(k + B) /= gains.L(detail::dft_slot(k, W));
    return C;
}

} // namespace corrsamp
