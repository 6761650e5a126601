#include "corrsamp/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace corrsamp {

void SolverConfig::validate() const {
    require(max_iters >= 1, "solver: max_iters must be at least 1");
    require(tol_primal > 0 && tol_dual > 0, "solver: tolerances must be positive");
    require(admm_rho > 0, "solver: admm_rho must be positive");
    require(lambda >= 0, "solver: lambda must be nonnegative");
    require(delta >= 0, "solver: delta must be nonnegative");
}

double nuclear_norm(const Matrix& X) {
    if (X.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(X);
    return svd.singularValues().sum();
}

Matrix svt(const Matrix& Y, double tau) {
    require(tau >= 0, "svt: threshold must be nonnegative");
    if (Y.size() == 0) return Y;
    Eigen::BDCSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    Index keep = 0;
    while (keep < s.size() && s(keep) > tau) ++keep;
    if (keep == 0) return Matrix::Zero(Y.rows(), Y.cols());
    const Vector shrunk = (s.head(keep).array() - tau).matrix();
    return svd.matrixU().leftCols(keep) * shrunk.asDiagonal() *
           svd.matrixV().leftCols(keep).transpose();
}

double relative_error(const Matrix& X_hat, const Matrix& X0) {
    require_dims(X_hat.rows() == X0.rows() && X_hat.cols() == X0.cols(),
                 "relative_error: shapes differ");
    const double ref = X0.norm();
    if (ref == 0.0) throw UndefinedError("relative_error: ground truth is zero");
    return (X_hat - X0).norm() / ref;
}

double oversampling_factor(Index M, Index Omega, Index R, Index W) {
    require(M >= 1 && Omega >= 1 && W >= 1 && R >= 1, "oversampling_factor: arguments must be positive");
    require(R < W + M, "oversampling_factor: R must be smaller than W + M");
    return static_cast<double>(M * Omega) / static_cast<double>(R * (W + M - R));
}

namespace {

RecoveryResult finish(Matrix X_hat, const SampleMatrix* truth) {
    RecoveryResult res;
    res.objective = nuclear_norm(X_hat);
    if (truth) res.rel_error = relative_error(X_hat, *truth);
    res.X_hat = std::move(X_hat);
    return res;
}

void check_measurements(const MeasurementOperator& op, const Vector& y) {
    require_dims(y.size() == op.measurements(), "recovery: measurement vector has the wrong length");
}

} // namespace

RecoveryResult klt_estimate(const MeasurementOperator& op, const Vector& y, double lambda,
                            const SampleMatrix* truth) {
    require(lambda >= 0, "klt_estimate: lambda must be nonnegative");
    check_measurements(op, y);
    RecoveryResult res = finish(svt(op.adjoint(y), lambda / 2.0), truth);
    res.converged = true;
    return res;
}

RecoveryResult solve_nuclear_equality(const MeasurementOperator& op, const Vector& y,
                                      const SolverConfig& cfg, const SampleMatrix* truth) {
    cfg.validate();
    check_measurements(op, y);
    const Index M = op.rows(), W = op.cols();
    const double scale = y.norm();
    if (scale == 0.0) {
        RecoveryResult res = finish(Matrix::Zero(M, W), truth);
        res.converged = true;
        return res;
    }

    const Vector yn = y / scale;
    const Vector inv_gram = op.gram_diagonal().cwiseInverse();
    const double tau = 1.0 / cfg.admm_rho;

    Matrix X = Matrix::Zero(M, W), Z = Matrix::Zero(M, W), U = Matrix::Zero(M, W);
    Matrix Z_prev(M, W);
    double primal = 0.0, dual = 0.0;
    Index it = 0;
    bool converged = false;
    while (it < cfg.max_iters) {
        ++it;
        const Matrix V = Z - U;
        X = V - op.adjoint((op.forward(V) - yn).cwiseProduct(inv_gram));
        Z_prev = Z;
        Z = svt(X + U, tau);
        U += X - Z;

        primal = (X - Z).norm();
        dual = cfg.admm_rho * (Z - Z_prev).norm() / std::max(Z.norm(), 1.0);
        if (primal <= cfg.tol_primal && dual <= cfg.tol_dual) {
            converged = true;
            break;
        }
    }

    RecoveryResult res = finish(Z * scale, truth);
    res.iters = it;
    res.converged = converged;
    res.primal_residual = primal;
    res.dual_residual = dual;
    return res;
}

RecoveryResult solve_nuclear_noisy(const MeasurementOperator& op, const Vector& y,
                                   const SolverConfig& cfg, const SampleMatrix* truth) {
    cfg.validate();
    check_measurements(op, y);
    const Index M = op.rows(), W = op.cols(), L = op.measurements();
    const double scale = y.norm();
    if (cfg.delta >= scale) {
        // The origin is feasible and has the smallest possible nuclear norm.
        RecoveryResult res = finish(Matrix::Zero(M, W), truth);
        res.converged = true;
        return res;
    }

    const Vector yn = y / scale;
    const double radius = cfg.delta / scale;
    const Vector ridge = (op.gram_diagonal().array() + 1.0).inverse().matrix();
    const double tau = 1.0 / cfg.admm_rho;

    auto project_ball = [&](const Vector& v) -> Vector {
        const Vector off = v - yn;
        const double n = off.norm();
        if (n <= radius) return v;
        return yn + off * (radius / n);
    };

    Matrix X = Matrix::Zero(M, W), Z = Matrix::Zero(M, W), U = Matrix::Zero(M, W);
    Vector w = yn, u = Vector::Zero(L);
    Matrix Z_prev(M, W);
    double primal = 0.0, dual = 0.0;
    Index it = 0;
    bool converged = false;
    while (it < cfg.max_iters) {
        ++it;
        // (I + A^*A) X = Q, inverted with the Woodbury identity since A A^* is diagonal.
        const Matrix Q = (Z - U) + op.adjoint(w - u);
        X = Q - op.adjoint(op.forward(Q).cwiseProduct(ridge));
        const Vector AX = op.forward(X);

        Z_prev = Z;
        Z = svt(X + U, tau);
        const Vector w_prev = w;
        w = project_ball(AX + u);

        U += X - Z;
        u += AX - w;

        primal = std::sqrt((X - Z).squaredNorm() + (AX - w).squaredNorm());
        dual = cfg.admm_rho *
               std::sqrt((Z - Z_prev).squaredNorm() + (w - w_prev).squaredNorm()) /
               std::max(Z.norm(), 1.0);
        if (primal <= cfg.tol_primal && dual <= cfg.tol_dual) {
            converged = true;
            break;
        }
    }

    RecoveryResult res = finish(Z * scale, truth);
    res.iters = it;
    res.converged = converged;
    res.primal_residual = primal;
    res.dual_residual = dual;
    return res;
}

} // namespace corrsamp
