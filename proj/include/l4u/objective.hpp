#pragma once

// l4 sparsity objectives and their derivatives.
//
// For x = A y the per-sample objective is ||x||_4^4 = sum_i |x_i|^4. Three
// expectation backends share one interface:
//   DatasetSpec     sum over the columns of a finite sample set,
//   MonteCarloSpec  sample mean over S seeded draws of a stochastic model,
//   AnalyticL1Spec  exact expectation under the single-path multipath model
//                   y_b = c exp(j Omega b), Omega ~ U(0, 2 pi).
//
// Matrix gradients use the conjugate (Wirtinger) convention
//   grad = sum_m 2 (|x_m|^2 o x_m) y_m^H,
// i.e. dg = 2 Re <grad, dA>. Perturbing the real part of A_{ij} by h changes g
// by 2 h Re(grad_ij); perturbing the imaginary part by 2 h Im(grad_ij).
//
// Reductions are deterministic: per-sample values are combined by a pairwise
// tree in sample order, matrix accumulators in fixed chunks of samples.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "l4u/matkit.hpp"
#include "l4u/models.hpp"

namespace l4u {

struct DatasetSpec {
  SampleSet y;
};

struct MonteCarloSpec {
  StochasticModel model;
  std::size_t samples = 100'000;
  /// Replaces the model's own seed when drawing the S samples.
  std::uint64_t seed = 0;
};

struct AnalyticL1Spec {
  std::size_t b = 8;
  double c_mag = 1.0;
};

using ObjectiveSpec = std::variant<DatasetSpec, MonteCarloSpec, AnalyticL1Spec>;

std::size_t spec_dim(const ObjectiveSpec& spec);
void validate(const ObjectiveSpec& spec);

/// Materialized samples with their weight in the expectation (1 for a dataset
/// sum, 1/S for a Monte-Carlo mean). Null samples for the analytic backend.
struct SampleBackend {
  std::shared_ptr<const SampleSet> samples;
  double weight = 1.0;
};
SampleBackend sample_backend(const ObjectiveSpec& spec);
SampleSet draw_mc_samples(const MonteCarloSpec& spec);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  /// False for S = 1, where the standard error is undefined (std_error = NaN).
  bool std_error_defined = false;
};

std::vector<double> per_sample_l4(const CMatrix& a, const SampleSet& y);
double g_det(const CMatrix& a, const SampleSet& y);
double g_det(const UnitaryMatrix& a, const SampleSet& y);
McEstimate g_mc(const CMatrix& a, const MonteCarloSpec& spec);
/// Paired estimate of E[||A2 y||^4 - ||A1 y||^4] on the same draws.
McEstimate g_mc_difference(const CMatrix& a2, const CMatrix& a1, const MonteCarloSpec& spec);
/// |c|^4 sum_i sum_{p-q+r-n=0} A_ip conj(A_iq) A_ir conj(A_in).
double g_analytic_L1(const CMatrix& a, std::size_t b, double c_mag);
/// Objective under any backend (sum, mean, or exact expectation).
double evaluate(const CMatrix& a, const ObjectiveSpec& spec);

CMatrix grad_gdet(const CMatrix& a, const SampleSet& y);

struct GradientEstimate {
  CMatrix mean;
  /// Per-entry standard error sqrt(var(Re) + var(Im)) / sqrt(S), row-major.
  std::vector<double> std_error;
  std::size_t samples = 0;
};
GradientEstimate grad_mc(const CMatrix& a, const MonteCarloSpec& spec);
CMatrix grad_analytic_L1(const CMatrix& a, double c_mag);
CMatrix gradient(const CMatrix& a, const ObjectiveSpec& spec);
/// Gradient of ||A||_4^4: 2 |A|^2 o A.
CMatrix pure_gradient(const CMatrix& a);

/// Second-moment matrix E[w w^T] of w = ((|x_i|^2 - |x_k|^2)/2, Re z, -Im z),
/// z = x_i conj(x_k). After x_i <- exp(j db) x_i followed by the rotation
/// (x_i, x_k) <- (c x_i + s x_k, -s x_i + c x_k), the pair's objective equals
/// const + 2 v^T M v with v = (cos 2a, sin 2a cos db, sin 2a sin db).
using PairMatrix = std::array<std::array<double, 3>, 3>;
PairMatrix pair_matrix_from_rows(std::span<const cplx> xi, std::span<const cplx> xk, double weight);
PairMatrix pair_matrix_analytic(const CMatrix& a, std::size_t i, std::size_t k, double c_mag);
PairMatrix pair_matrix(const CMatrix& a, std::size_t i, std::size_t k, const ObjectiveSpec& spec);

struct PairDerivative {
  std::size_t i = 0;
  std::size_t k = 0;
  double first = 0.0;
  double second = 0.0;
};

struct DerivativeReport {
  std::size_t b = 0;
  std::vector<PairDerivative> pairs;  // all i > k, k-major order
  double max_abs_first = 0.0;
  double max_second = 0.0;
};

/// first  = 4 E[Re(x_i conj x_k)(|x_i|^2 - |x_k|^2)]
/// second = 4 E[2 Re(x_k^2 conj(x_i)^2) + 4|x_i|^2|x_k|^2 - |x_i|^4 - |x_k|^4]
/// i.e. the derivatives of alpha -> g(G(i,k,alpha) A) at alpha = 0.
DerivativeReport ca_derivatives(const UnitaryMatrix& a, const ObjectiveSpec& spec);
DerivativeReport ca_derivatives(const CMatrix& a, const ObjectiveSpec& spec);

/// (8/B^2)(3B csc^2(pi(i-k)/B) - (2B^3 + 7B)/3); indices are 0-based, i > k.
double d1_closed_form(std::size_t b, std::size_t i, std::size_t k);

/// First CA derivative at the orthonormal DCT-II under y_b = cos(Omega b + Phi).
double dct_first_derivative(std::size_t b, std::size_t i, std::size_t k);

}  // namespace l4u
