#pragma once

#include <cstdint>

#include "corrsamp/common.hpp"
#include "corrsamp/signal_model.hpp"

namespace corrsamp {

/// Per-channel +-1 chipping sequences, one row per channel.
struct ModulatorBank {
    Matrix signs;
    std::uint64_t seed = 0;

    Index channels() const { return signs.rows(); }
    Index width() const { return signs.cols(); }
};

/// Frequency response of a random all-pass circulant filter in DFT ordering.
/// Unit modulus, conjugate symmetric, so the impulse response is real and the
/// circulant matrix is orthogonal.
struct FilterSpectrum {
    CVector gains;
    std::uint64_t seed = 0;

    Index width() const { return gains.size(); }
};

/// Haar-distributed M x M orthogonal mixing matrix (the AVMM).
struct Mixer {
    Matrix A;
    std::uint64_t seed = 0;

    Index channels() const { return A.rows(); }
};

/// Diagonal of the integrate-and-dump model in DFT ordering [0..B, -B..-1].
struct LowpassGains {
    CVector L;

    Index width() const { return L.size(); }
    double condition_ratio() const {
        const Vector mag = L.cwiseAbs();
        return mag.maxCoeff() / mag.minCoeff();
    }
};

ModulatorBank gen_modulator_bank(Index M, Index W, std::uint64_t seed);

/// Odd W: h(0) = +-1, h(w) = e^{j theta_w} for 1 <= w <= (W-1)/2, mirrored by conjugation.
/// Even W: additionally h(W/2) = +-1.
FilterSpectrum gen_filter(Index W, std::uint64_t seed);

/// Real impulse response h = IDFT(gains); the circulant's first column.
Vector impulse_response(const FilterSpectrum& h);

/// Circularly convolves each row of X with the filter (X H^T).
SampleMatrix apply_filter(const SampleMatrix& X, const FilterSpectrum& h);

/// Adjoint (and inverse) of apply_filter: X H.
SampleMatrix apply_filter_adjoint(const SampleMatrix& X, const FilterSpectrum& h);

/// Sign-corrected QR of a standard Gaussian matrix.
Mixer gen_mixer(Index M, std::uint64_t seed);

/// X_p = A X H^T.
SampleMatrix preprocess(const SampleMatrix& X, const Mixer& A, const FilterSpectrum& h);

/// A^T Y H, the adjoint and inverse of preprocess.
SampleMatrix preprocess_adjoint(const SampleMatrix& Y, const Mixer& A, const FilterSpectrum& h);

/// Integrator gains (e^{j 2 pi w / W} - 1) / (j 2 pi w), with 1/W at w = 0.
/// Requires odd W.
LowpassGains lowpass_gains(Index W);

/// Samples of the integrated ensemble, X0 = C L F^H:
/// X0[m, n] = W^{-1/2} * integral of x_m(t) over [n/W, (n+1)/W].
SampleMatrix apply_integrator_model(const FourierCoeffs& C);

/// Recovers C from X0 by a forward DFT followed by division by L.
FourierCoeffs undo_integrator_model(const SampleMatrix& X0);

} // namespace corrsamp
