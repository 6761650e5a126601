#include "corrsamp/sampling_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "corrsamp/seeding.hpp"

namespace corrsamp {

SamplingMask gen_mask(Index M, Index W, Index Omega, std::uint64_t seed) {
    require(M >= 1 && W >= 1, "gen_mask: dimensions must be positive");
    require(Omega >= 1 && Omega <= W, "gen_mask: Omega must lie in [1, W]");
    SamplingMask mask;
    mask.width = W;
    mask.seed = seed;
    mask.sets.resize(M);
    std::vector<Index> grid(W);
    for (Index m = 0; m < M; ++m) {
        Rng rng = make_rng(seed, "mask", static_cast<std::uint64_t>(m));
        std::iota(grid.begin(), grid.end(), Index{0});
        for (Index i = 0; i < Omega; ++i) {
            std::uniform_int_distribution<Index> pick(i, W - 1);
            std::swap(grid[i], grid[pick(rng)]);
        }
        auto& set = mask.sets[m];
        set.assign(grid.begin(), grid.begin() + Omega);
        std::sort(set.begin(), set.end());
    }
    return mask;
}

BlockPartition make_partition(Index W, Index Omega) {
    if (Omega < 1 || Omega > W || W % Omega != 0)
        throw PartitionError("block rate Omega = " + std::to_string(Omega) +
                             " must divide W = " + std::to_string(W));
    return {W, Omega};
}

Vector mask_forward(const SampleMatrix& X, const SamplingMask& mask) {
    require_dims(X.rows() == mask.channels() && X.cols() == mask.width,
                 "mask_forward: mask and matrix dimensions differ");
    const Index Omega = mask.rate();
    Vector y(mask.channels() * Omega);
    for (Index i = 0; i < mask.channels(); ++i)
        for (Index j = 0; j < Omega; ++j) y(i * Omega + j) = X(i, mask.sets[i][j]);
    return y;
}

SampleMatrix mask_adjoint(const Vector& y, const SamplingMask& mask) {
    const Index Omega = mask.rate();
    require_dims(y.size() == mask.channels() * Omega, "mask_adjoint: measurement length mismatch");
    SampleMatrix X = SampleMatrix::Zero(mask.channels(), mask.width);
    for (Index i = 0; i < mask.channels(); ++i)
        for (Index j = 0; j < Omega; ++j) X(i, mask.sets[i][j]) = y(i * Omega + j);
    return X;
}

Vector demod_forward(const SampleMatrix& X0, const ModulatorBank& bank, const BlockPartition& part) {
    require_dims(X0.rows() == bank.channels() && X0.cols() == bank.width() &&
                     part.width == X0.cols(),
                 "demod_forward: dimension mismatch");
    const Index Omega = part.rate, b = part.block_size();
    Vector y(X0.rows() * Omega);
    for (Index i = 0; i < X0.rows(); ++i) {
        for (Index j = 0; j < Omega; ++j) {
            double acc = 0.0;
            for (Index k = part.begin(j); k < part.begin(j) + b; ++k) acc += bank.signs(i, k) * X0(i, k);
            y(i * Omega + j) = acc;
        }
    }
    return y;
}

SampleMatrix demod_adjoint(const Vector& y, const ModulatorBank& bank, const BlockPartition& part) {
    const Index M = bank.channels(), Omega = part.rate, b = part.block_size();
    require_dims(y.size() == M * Omega && bank.width() == part.width,
                 "demod_adjoint: dimension mismatch");
    SampleMatrix X(M, part.width);
    for (Index i = 0; i < M; ++i)
        for (Index j = 0; j < Omega; ++j)
            for (Index k = part.begin(j); k < part.begin(j) + b; ++k)
                X(i, k) = y(i * Omega + j) * bank.signs(i, k);
    return X;
}

std::string to_string(Architecture arch) {
    switch (arch) {
    case Architecture::RandomSampling: return "random-sampling";
    case Architecture::RandomDemodulator: return "random-demodulator";
    case Architecture::UniversalSampling: return "universal-sampling";
    case Architecture::UniversalDemodulator: return "universal-demodulator";
    }
    return "unknown";
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "random-sampling" || name == "arch1") return Architecture::RandomSampling;
    if (name == "random-demodulator" || name == "arch2") return Architecture::RandomDemodulator;
    if (name == "universal-sampling" || name == "arch3-sampling")
        return Architecture::UniversalSampling;
    if (name == "universal-demodulator" || name == "arch3-demodulator" || name == "arch3")
        return Architecture::UniversalDemodulator;
    throw ParameterError("unknown architecture '" + name + "'");
}

bool uses_demodulator(Architecture arch) {
    return arch == Architecture::RandomDemodulator || arch == Architecture::UniversalDemodulator;
}

bool uses_preprocessing(Architecture arch) {
    return arch == Architecture::UniversalSampling || arch == Architecture::UniversalDemodulator;
}

DiversifierSet draw_diversifiers(const OperatorDescriptor& d) {
    DiversifierSet div;
    if (uses_demodulator(d.arch))
        div.bank = gen_modulator_bank(d.M, d.W, derive_seed(d.seed, "bank"));
    else
        div.mask = gen_mask(d.M, d.W, d.Omega, derive_seed(d.seed, "mask"));
    if (uses_preprocessing(d.arch)) {
        div.mixer = gen_mixer(d.M, derive_seed(d.seed, "avmm"));
        div.filter = gen_filter(d.W, derive_seed(d.seed, "lti"));
    }
    return div;
}

MeasurementOperator::MeasurementOperator(const OperatorDescriptor& desc) : desc_(desc) {
    require(desc.M >= 1 && desc.W >= 1, "MeasurementOperator: dimensions must be positive");
    require(desc.Omega >= 1 && desc.Omega <= desc.W, "MeasurementOperator: Omega must lie in [1, W]");
    if (uses_demodulator(desc.arch)) part_ = make_partition(desc.W, desc.Omega);
    div_ = draw_diversifiers(desc);
}

Vector MeasurementOperator::inner_forward(const SampleMatrix& X) const {
    if (part_) return demod_forward(X, *div_.bank, *part_);
    return mask_forward(X, *div_.mask);
}

SampleMatrix MeasurementOperator::inner_adjoint(const Vector& y) const {
    if (part_) return demod_adjoint(y, *div_.bank, *part_);
    return mask_adjoint(y, *div_.mask);
}

Vector MeasurementOperator::forward(const SampleMatrix& X) const {
    require_dims(X.rows() == desc_.M && X.cols() == desc_.W, "forward: matrix is not M x W");
    if (uses_preprocessing(desc_.arch)) return inner_forward(preprocess(X, *div_.mixer, *div_.filter));
    return inner_forward(X);
}

SampleMatrix MeasurementOperator::adjoint(const Vector& y) const {
    require_dims(y.size() == measurements(), "adjoint: measurement length mismatch");
    if (uses_preprocessing(desc_.arch))
        return preprocess_adjoint(inner_adjoint(y), *div_.mixer, *div_.filter);
    return inner_adjoint(y);
}

Vector MeasurementOperator::gram_diagonal() const {
    const double scale = part_ ? static_cast<double>(part_->block_size()) : 1.0;
    return Vector::Constant(measurements(), scale);
}

Matrix dense_matrix(const MeasurementOperator& op) {
    const Index M = op.rows(), W = op.cols();
    Matrix out(op.measurements(), M * W);
    SampleMatrix E = SampleMatrix::Zero(M, W);
    for (Index i = 0; i < M; ++i) {
        for (Index k = 0; k < W; ++k) {
            E(i, k) = 1.0;
            out.col(i * W + k) = op.forward(E);
            E(i, k) = 0.0;
        }
    }
    return out;
}

MeasurementRecord acquire(const MeasurementOperator& op, const SampleMatrix& X) {
    return {op.forward(X), op.descriptor(), std::nullopt};
}

double noise_radius(double sigma, Index L) {
    const double l = static_cast<double>(L);
    return sigma * std::sqrt(l + std::sqrt(l));
}

MeasurementRecord add_noise(const MeasurementRecord& rec, double sigma, std::uint64_t seed) {
    require(sigma >= 0, "add_noise: sigma must be nonnegative");
    MeasurementRecord out = rec;
    if (sigma > 0) {
        Rng rng = make_rng(seed, "noise");
        std::normal_distribution<double> normal(0.0, sigma);
        for (Index l = 0; l < out.y.size(); ++l) out.y(l) += normal(rng);
    }
    out.noise = NoiseInfo{sigma, noise_radius(sigma, rec.y.size()), seed};
    return out;
}

double snr_db(const SampleMatrix& X0, const Vector& noise) {
    return 10.0 * std::log10(X0.squaredNorm() / noise.squaredNorm());
}

double sigma_for_snr(const Vector& clean, double snr) {
    require(clean.size() > 0, "sigma_for_snr: empty measurement vector");
    return clean.norm() * std::pow(10.0, -snr / 20.0) / std::sqrt(static_cast<double>(clean.size()));
}

double expectation_identity_check(Index M, Index W, Index Omega, Index trials, std::uint64_t seed) {
    require(trials >= 1, "expectation_identity_check: need at least one trial");
    const BlockPartition part = make_partition(W, Omega);
    Rng rng = make_rng(seed, "expectation_x");
    std::normal_distribution<double> normal;
    SampleMatrix X(M, W);
    for (Index j = 0; j < W; ++j)
        for (Index i = 0; i < M; ++i) X(i, j) = normal(rng);

    SampleMatrix acc = SampleMatrix::Zero(M, W);
    for (Index t = 0; t < trials; ++t) {
        const ModulatorBank bank =
            gen_modulator_bank(M, W, derive_seed(seed, "expectation_bank", static_cast<std::uint64_t>(t)));
        acc += demod_adjoint(demod_forward(X, bank, part), bank, part);
    }
    acc /= static_cast<double>(trials);
    return (acc - X).norm() / X.norm();
}

} // namespace corrsamp
