#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corrsamp/common.hpp"
#include "corrsamp/diversify.hpp"

namespace corrsamp {

/// Random sampling locations of the non-uniform ADCs: channel m samples the
/// Nyquist-grid indices in sets[m] (sorted, distinct, exactly Omega of them).
struct SamplingMask {
    std::vector<std::vector<Index>> sets;
    Index width = 0;
    std::uint64_t seed = 0;

    Index channels() const { return static_cast<Index>(sets.size()); }
    Index rate() const { return sets.empty() ? 0 : static_cast<Index>(sets.front().size()); }
};

/// Integrate-and-dump blocks: block j covers [j*W/Omega, (j+1)*W/Omega).
struct BlockPartition {
    Index width = 0;
    Index rate = 0;

    Index block_size() const { return width / rate; }
    Index begin(Index j) const { return j * block_size(); }
};

/// Uniform-without-replacement mask with Omega samples per channel.
SamplingMask gen_mask(Index M, Index W, Index Omega, std::uint64_t seed);

/// Throws PartitionError unless 1 <= Omega <= W and Omega divides W.
BlockPartition make_partition(Index W, Index Omega);

// Flattening of measurements is channel-major: y[i * Omega + j].

Vector mask_forward(const SampleMatrix& X, const SamplingMask& mask);
SampleMatrix mask_adjoint(const Vector& y, const SamplingMask& mask);

/// y_ij = sum_{k in B_j} d_i[k] X0[i, k].
Vector demod_forward(const SampleMatrix& X0, const ModulatorBank& bank, const BlockPartition& part);
SampleMatrix demod_adjoint(const Vector& y, const ModulatorBank& bank, const BlockPartition& part);

enum class Architecture {
    RandomSampling,       // NUS ADC per channel
    RandomDemodulator,    // modulator + integrator + uniform ADC
    UniversalSampling,    // AVMM + random filter + NUS ADC
    UniversalDemodulator, // AVMM + random filter + random demodulator
};

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& name);
bool uses_demodulator(Architecture arch);
bool uses_preprocessing(Architecture arch);

/// Everything needed to regenerate an operator bit-exactly.
struct OperatorDescriptor {
    Architecture arch = Architecture::RandomDemodulator;
    Index M = 0;
    Index W = 0;
    Index Omega = 0;
    std::uint64_t seed = 0;

    bool operator==(const OperatorDescriptor&) const = default;
};

/// The randomness of one architecture draw.
struct DiversifierSet {
    std::optional<SamplingMask> mask;
    std::optional<ModulatorBank> bank;
    std::optional<FilterSpectrum> filter;
    std::optional<Mixer> mixer;
};

DiversifierSet draw_diversifiers(const OperatorDescriptor& desc);

/// Linear map from M x W matrices to L = M * Omega samples, with its adjoint.
class MeasurementOperator {
public:
    explicit MeasurementOperator(const OperatorDescriptor& desc);

    const OperatorDescriptor& descriptor() const { return desc_; }
    const DiversifierSet& diversifiers() const { return div_; }
    Index rows() const { return desc_.M; }
    Index cols() const { return desc_.W; }
    Index measurements() const { return desc_.M * desc_.Omega; }

    Vector forward(const SampleMatrix& X) const;
    SampleMatrix adjoint(const Vector& y) const;

    /// Diagonal of A A^*. For every variant A A^* is diagonal: ones for entry
    /// sampling and W/Omega for the demodulator; orthogonal preprocessing leaves it unchanged.
    Vector gram_diagonal() const;

private:
    Vector inner_forward(const SampleMatrix& X) const;
    SampleMatrix inner_adjoint(const Vector& y) const;

    OperatorDescriptor desc_;
    DiversifierSet div_;
    std::optional<BlockPartition> part_;
};

/// Explicit L x (M W) matrix of the operator acting on the row-major vec(X).
Matrix dense_matrix(const MeasurementOperator& op);

struct NoiseInfo {
    double sigma = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

struct MeasurementRecord {
    Vector y;
    OperatorDescriptor op;
    std::optional<NoiseInfo> noise;
};

MeasurementRecord acquire(const MeasurementOperator& op, const SampleMatrix& X);

/// Noise-ball radius sigma * sqrt(L + sqrt(L)).
double noise_radius(double sigma, Index L);

/// y' = y + xi with xi ~ N(0, sigma^2 I); records sigma and the radius.
MeasurementRecord add_noise(const MeasurementRecord& rec, double sigma, std::uint64_t seed);

/// 10 log10(||X0||_F^2 / ||xi||_2^2).
double snr_db(const SampleMatrix& X0, const Vector& noise);

/// Noise level reaching a target SNR in expectation: ||A(X0)|| 10^{-snr/20} / sqrt(L).
double sigma_for_snr(const Vector& clean, double snr);

/// Averages A^*A(X) over `trials` independent modulator draws and returns
/// ||avg - X||_F / ||X||_F for a fixed Gaussian X.
double expectation_identity_check(Index M, Index W, Index Omega, Index trials, std::uint64_t seed);

} // namespace corrsamp
