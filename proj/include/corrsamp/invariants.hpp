#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrsamp/common.hpp"
#include "corrsamp/sampling_ops.hpp"

namespace corrsamp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class Fault { None, AdjointSignFlip };

CheckResult check_adjoint(Architecture arch, Index M, Index W, Index Omega, Index pairs,
                          std::uint64_t seed, Fault fault = Fault::None);
CheckResult check_operator_norm(Index M, Index W, Index Omega, std::uint64_t seed);
CheckResult check_expectation_identity(Index M, Index W, Index Omega, Index draws, std::uint64_t seed);
CheckResult check_mask_projector(Index M, Index W, Index Omega, std::uint64_t seed);
CheckResult check_orthogonal_preprocessing(Index M, Index W, std::uint64_t seed);
CheckResult check_coherence_bounds(Index count, std::uint64_t seed);
CheckResult check_spike_coherence();
CheckResult check_lemma(Index M, Index W, Index R, Index Omega, Index draws, std::uint64_t seed);
CheckResult check_svt_oracle(Index count, std::uint64_t seed);
CheckResult check_klt_prox(Index count, std::uint64_t seed);

/// Runs every check with fixed sizes derived from `seed`.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, Fault fault = Fault::None);

/// One "PASS name: detail" / "FAIL name: detail" line per check. No timings.
std::string format_report(const std::vector<CheckResult>& results);

} // namespace corrsamp
