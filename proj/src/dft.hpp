#pragma once

// Row-wise DFT helpers shared by the synthesis and filtering code.

#include <unsupported/Eigen/FFT>

#include "corrsamp/common.hpp"

namespace corrsamp::detail {

/// Unnormalized forward DFT of every row: out[k] = sum_n x[n] e^{-j 2 pi k n / W}.
inline CMatrix dft_rows(const CMatrix& X) {
    Eigen::FFT<double> fft;
    CMatrix out(X.rows(), X.cols());
    std::vector<cplx> in(X.cols()), spec(X.cols());
    for (Index m = 0; m < X.rows(); ++m) {
        for (Index n = 0; n < X.cols(); ++n) in[n] = X(m, n);
        fft.fwd(spec, in);
        for (Index n = 0; n < X.cols(); ++n) out(m, n) = spec[n];
    }
    return out;
}

/// Inverse DFT of every row including the 1/W factor.
inline CMatrix idft_rows(const CMatrix& S) {
    Eigen::FFT<double> fft;
    CMatrix out(S.rows(), S.cols());
    std::vector<cplx> in(S.cols()), time(S.cols());
    for (Index m = 0; m < S.rows(); ++m) {
        for (Index n = 0; n < S.cols(); ++n) in[n] = S(m, n);
        fft.inv(time, in);
        for (Index n = 0; n < S.cols(); ++n) out(m, n) = time[n];
    }
    return out;
}

/// Position of frequency k in {-B..B} within DFT ordering [0..B, -B..-1].
inline Index dft_slot(Index k, Index W) { return k >= 0 ? k : k + W; }

} // namespace corrsamp::detail
