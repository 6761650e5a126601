#pragma once

#include <optional>

#include "corrsamp/common.hpp"
#include "corrsamp/sampling_ops.hpp"

namespace corrsamp {

struct SolverConfig {
    Index max_iters = 2000;
    double tol_primal = 1e-8;
    double tol_dual = 1e-8;
    double admm_rho = 1.0;
    double lambda = 0.0; ///< KLT regularization weight
    double delta = 0.0;  ///< noise-ball radius for the constrained program

    void validate() const;
};

struct RecoveryResult {
    SampleMatrix X_hat;
    std::optional<double> rel_error;
    Index iters = 0;
    bool converged = false;
    double objective = 0.0; ///< nuclear norm of X_hat
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

double nuclear_norm(const Matrix& X);

/// Singular value soft thresholding: sum_i max(sigma_i - tau, 0) u_i v_i^T.
Matrix svt(const Matrix& Y, double tau);

/// argmin ||X||_F^2 - 2 <y, A(X)> + lambda ||X||_*, i.e. svt(A^*(y), lambda / 2).
RecoveryResult klt_estimate(const MeasurementOperator& op, const Vector& y, double lambda,
                            const SampleMatrix* truth = nullptr);

/// min ||X||_* subject to A(X) = y, by ADMM on the split X = Z.
///
/// The X-step projects onto the affine set {A(X) = y} in closed form using the
/// diagonal A A^*; the Z-step is svt with threshold 1/rho. The problem is solved on
/// y / ||y|| and rescaled, so rho acts on a normalized problem and the solver is
/// exactly positively homogeneous in y for power-of-two scalings.
RecoveryResult solve_nuclear_equality(const MeasurementOperator& op, const Vector& y,
                                      const SolverConfig& cfg, const SampleMatrix* truth = nullptr);

/// min ||X||_* subject to ||y - A(X)||_2 <= delta, by ADMM with splits X = Z and
/// A(X) = w, where w is projected onto the ball of radius delta around y.
RecoveryResult solve_nuclear_noisy(const MeasurementOperator& op, const Vector& y,
                                   const SolverConfig& cfg, const SampleMatrix* truth = nullptr);

/// ||X_hat - X0||_F / ||X0||_F. Throws UndefinedError when X0 = 0.
double relative_error(const Matrix& X_hat, const Matrix& X0);

/// eta = M Omega / (R (W + M - R)).
double oversampling_factor(Index M, Index Omega, Index R, Index W);

} // namespace corrsamp
