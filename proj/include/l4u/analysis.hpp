#pragma once

// Numerical verification experiments:
//   dft-msp   the DFT is an MSP fixed point of the multipath objective,
//   dft-ca    the DFT satisfies the CA local-optimality conditions under the
//             single-path model (second derivatives against the closed form),
//   dct-scan  the DCT-II violates the CA first-order condition under the
//             sinusoid model for every size in the range.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "l4u/learn.hpp"

namespace l4u {

struct PerBResult {
  std::size_t b = 0;
  /// Headline residual for the claim (fixed-point residual, worst relative
  /// closed-form error, or the largest |first derivative|).
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  /// Witness pair (i > k, 0-based) when the claim is pairwise.
  bool has_pair = false;
  std::size_t worst_i = 0;
  std::size_t worst_k = 0;
  std::map<std::string, double> metrics;
};

struct VerificationReport {
  std::string claim;
  std::vector<std::size_t> b_range;
  std::vector<PerBResult> per_b;
  bool passed = false;
};

struct MspMode {
  enum class Kind { analytic, monte_carlo };
  Kind kind = Kind::analytic;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

/// Default path gains 0.6^l exp(0.9 j l), l = 0..L-1.
std::vector<cplx> default_gains(std::size_t l);

struct MspResidual {
  /// Strict test: the diagonal factor must be real.
  FixedPointVerdict verdict;
  /// Factorization residual: min over sides of ||offdiag(grad A^H)||_F and
  /// ||offdiag(A^H grad)||_F relative to ||grad||_F, i.e. grad = D A or A D
  /// with D diagonal and possibly complex. MSP maps such an A to A up to
  /// diagonal phases.
  double residual = 0.0;
  double residual_left = 0.0;
  double residual_right = 0.0;
  /// Pass threshold: 1e-9 (analytic) or 5 x the propagated MC bound.
  double tolerance = 0.0;
  /// sqrt(sum of per-entry gradient standard errors^2) / ||grad||_F (MC only).
  double mc_bound = 0.0;
  bool passed = false;
};

/// Fixed-point residual of the MSP iteration at `a` for the multipath model
/// with the given gains. `gains` empty means default_gains(l).
MspResidual msp_fixed_point_residual(const UnitaryMatrix& a, std::size_t l, std::vector<cplx> gains,
                                     const MspMode& mode);

VerificationReport verify_dft_msp(const std::vector<std::size_t>& b_list, std::size_t l,
                                  const std::vector<cplx>& gains, const MspMode& mode);
VerificationReport verify_dft_ca(const std::vector<std::size_t>& b_list);
VerificationReport scan_dct(const std::vector<std::size_t>& b_range);

struct TransformComparison {
  /// g_det(a2, test) / g_det(a1, test)
  double ratio = 0.0;
  std::vector<double> per_sample_a1;
  std::vector<double> per_sample_a2;
};

TransformComparison compare_transforms(const UnitaryMatrix& a1, const UnitaryMatrix& a2, const SampleSet& test);

}  // namespace l4u
