#pragma once

// Learners over the unitary group.
//
// MSP (matching, stretching, projection) replaces A by the polar factor of
// the objective gradient each iteration. CA (coordinate ascent) sweeps over
// index pairs (i, k), i > k, and applies the phase-plus-Givens update that
// maximizes the objective restricted to that pair.

#include <cstdint>
#include <string_view>
#include <vector>

#include "l4u/matkit.hpp"
#include "l4u/objective.hpp"

namespace l4u {

enum class Termination { step_tol, obj_tol, max_iters, fixed_point };
std::string_view to_string(Termination t);

struct LearnTrace {
  /// objective[0] is the initial value, then one entry per iteration (MSP)
  /// or per sweep (CA).
  std::vector<double> objective;
  /// ||A_{t+1} - A_t||_F per iteration or sweep.
  std::vector<double> step_norm;
  Termination terminated_by = Termination::max_iters;
  /// CA only: total gain of each sweep, and the running objective after every
  /// accepted pair update (starting from the initial value).
  std::vector<double> sweep_gain;
  std::vector<double> update_objective;
  std::size_t reprojections = 0;
};

struct MspConfig {
  std::size_t max_iters = 500;
  double step_tol = 1e-10;
  /// Relative change |g_{t+1} - g_t| / max(|g_t|, 1e-300).
  double obj_tol = 1e-12;
  UnitaryMatrix init = UnitaryMatrix::identity(1);
};

enum class SweepOrder { lexicographic, seeded_random };

struct CaConfig {
  std::size_t max_sweeps = 100;
  SweepOrder sweep_order = SweepOrder::lexicographic;
  std::uint64_t order_seed = 0;
  /// Pair updates whose gain is at most inner_tol are skipped.
  double inner_tol = 1e-12;
  /// Stop once a full sweep gains at most this much.
  double improvement_tol = 1e-10;
  UnitaryMatrix init = UnitaryMatrix::identity(1);
};

struct LearnResult {
  UnitaryMatrix a;
  LearnTrace trace;
};

/// project_unitary(grad).
UnitaryMatrix msp_step(const UnitaryMatrix& a, const CMatrix& grad);
/// One iteration on ||A||_4^4 itself: project_unitary(2 |A|^2 o A).
UnitaryMatrix msp_pure_step(const UnitaryMatrix& a);
LearnResult msp_run(const MspConfig& cfg, const ObjectiveSpec& spec);

struct InnerResult {
  double alpha = 0.0;
  double beta_i = 0.0;
  double beta_k = 0.0;
  double gain = 0.0;
};

/// Exact maximizer of the pair objective from its 3x3 moment matrix M (see
/// PairMatrix): the best v is M's leading eigenvector, gain = 2(lambda_max - M11).
/// alpha is returned in [0, pi/4]; beta_k is always 0.
InnerResult ca_inner_from_moments(const PairMatrix& m, double tol);
InnerResult ca_inner(const UnitaryMatrix& a, std::size_t i, std::size_t k, const ObjectiveSpec& spec,
                     double tol);
LearnResult ca_run(const CaConfig& cfg, const ObjectiveSpec& spec);

/// Pairs in the order a sweep visits them.
std::vector<std::pair<std::size_t, std::size_t>> sweep_pairs(std::size_t n, SweepOrder order,
                                                             std::uint64_t seed, std::size_t sweep);

struct FixedPointVerdict {
  bool is_fixed = false;
  /// Norms of the off-diagonal plus imaginary-diagonal parts of grad A^H and
  /// A^H grad, divided by ||grad||_F.
  double residual_left = 0.0;
  double residual_right = 0.0;
  double tol = 1e-8;
};

FixedPointVerdict check_msp_fixed_point(const UnitaryMatrix& a, const CMatrix& grad, double tol = 1e-8);

struct LocalOptVerdict {
  bool verdict = false;
  /// All second derivatives vanished (e.g. all-zero data).
  bool degenerate = false;
  DerivativeReport report;
};

/// verdict = max|first| <= tol and every second < -tol.
LocalOptVerdict check_ca_local_opt(const UnitaryMatrix& a, const ObjectiveSpec& spec, double tol = 1e-10);

/// Symmetric 3x3 eigen-decomposition (cyclic Jacobi). Eigenvalues ascending;
/// column j of `vectors` belongs to values[j].
struct SymEigen3 {
  std::array<double, 3> values{};
  std::array<std::array<double, 3>, 3> vectors{};
};
SymEigen3 sym_eigen3(const PairMatrix& m);

}  // namespace l4u
