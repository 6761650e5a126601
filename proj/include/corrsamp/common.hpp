#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace corrsamp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using cplx = std::complex<double>;
using Index = Eigen::Index;

/// M x W real matrix of Nyquist-grid samples (rows are channels, columns are time).
using SampleMatrix = Matrix;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Invalid argument value or range (rank out of range, nonpositive bandwidth, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operand shapes that do not agree.
class DimensionError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Fourier coefficients that are not conjugate symmetric.
class SymmetryError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Block rate that does not divide the Nyquist length.
class PartitionError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Quantity that is not defined for the given input (e.g. coherence of a zero matrix).
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

inline void require_dims(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

} // namespace corrsamp
