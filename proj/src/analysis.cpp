#include "l4u/analysis.hpp"

#include <cmath>
#include <string>

#include "l4u/parallel.hpp"

namespace l4u {

namespace {

constexpr double kAnalyticResidualTol = 1e-9;
constexpr double kMcSigmas = 5.0;
constexpr double kCaFirstTol = 1e-10;
constexpr double kClosedFormRelTol = 1e-6;
constexpr double kDctThreshold = 1e-6;

double offdiag_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

bool all_passed(const std::vector<PerBResult>& v) {
  for (const auto& r : v)
    if (!r.passed) return false;
  return !v.empty();
}

}  // namespace

std::vector<cplx> default_gains(std::size_t l) {
  std::vector<cplx> g(l);
  for (std::size_t p = 0; p < l; ++p) g[p] = std::polar(std::pow(0.6, double(p)), 0.9 * double(p));
  return g;
}

MspResidual msp_fixed_point_residual(const UnitaryMatrix& a, std::size_t l, std::vector<cplx> gains,
                                     const MspMode& mode) {
  if (l == 0) throw Error(ErrorKind::invalid_arguments, "path count must be >= 1");
  if (gains.empty()) gains = default_gains(l);
  if (gains.size() != l) throw Error(ErrorKind::invalid_arguments, "need one gain per path");
  MspResidual out;
  CMatrix grad;
  if (mode.kind == MspMode::Kind::analytic) {
    if (l != 1) throw Error(ErrorKind::invalid_arguments, "analytic mode requires a single path");
    grad = grad_analytic_L1(a.matrix(), std::abs(gains[0]));
    out.tolerance = kAnalyticResidualTol;
  } else {
    if (mode.samples < 2) throw Error(ErrorKind::invalid_arguments, "the Monte Carlo tolerance needs at least 2 samples");
    MultipathModel model{a.dim(), l, gains, mode.seed, std::nullopt};
    const GradientEstimate g = grad_mc(a.matrix(), {model, mode.samples, mode.seed});
    grad = g.mean;
    double s2 = 0.0;
    for (double e : g.std_error) s2 += e * e;
    out.mc_bound = std::sqrt(s2) / frobenius_norm(grad);
    out.tolerance = kMcSigmas * out.mc_bound;
  }
  out.verdict = check_msp_fixed_point(a, grad, out.tolerance);
  const double gn = frobenius_norm(grad);
  if (gn > 0.0) {
    const CMatrix ah = a.matrix().adjoint();
    out.residual_left = offdiag_norm(grad * ah) / gn;
    out.residual_right = offdiag_norm(ah * grad) / gn;
  }
  out.residual = std::min(out.residual_left, out.residual_right);
  out.passed = out.residual <= out.tolerance;
  return out;
}

VerificationReport verify_dft_msp(const std::vector<std::size_t>& b_list, std::size_t l,
                                  const std::vector<cplx>& gains, const MspMode& mode) {
  VerificationReport rep;
  rep.claim = "dft-msp";
  rep.b_range = b_list;
  for (std::size_t b : b_list) {
    if (b == 0) throw Error(ErrorKind::invalid_arguments, "b must be >= 1");
    const MspResidual r = msp_fixed_point_residual(dft_matrix(b), l, gains, mode);
    PerBResult p;
    p.b = b;
    p.residual = r.residual;
    p.tolerance = r.tolerance;
    p.passed = r.passed;
    p.metrics["residual_left"] = r.residual_left;
    p.metrics["residual_right"] = r.residual_right;
    p.metrics["strict_residual"] = std::min(r.verdict.residual_left, r.verdict.residual_right);
    if (mode.kind == MspMode::Kind::monte_carlo) {
      p.metrics["mc_bound"] = r.mc_bound;
      p.metrics["samples"] = static_cast<double>(mode.samples);
    }
    rep.per_b.push_back(std::move(p));
  }
  rep.passed = all_passed(rep.per_b);
  return rep;
}

VerificationReport verify_dft_ca(const std::vector<std::size_t>& b_list) {
  VerificationReport rep;
  rep.claim = "dft-ca";
  rep.b_range = b_list;
  rep.per_b.resize(b_list.size());
  for (std::size_t b : b_list)
    if (b < 2) throw Error(ErrorKind::invalid_arguments, "dft-ca needs b >= 2");
  parallel_for(b_list.size(), [&](std::size_t idx) {
    const std::size_t b = b_list[idx];
    const LocalOptVerdict v = check_ca_local_opt(dft_matrix(b), AnalyticL1Spec{b, 1.0}, kCaFirstTol);
    PerBResult p;
    p.b = b;
    p.has_pair = true;
    double worst_rel = 0.0;
    bool all_negative = true;
    for (const auto& d : v.report.pairs) {
      const double ref = d1_closed_form(b, d.i, d.k);
      const double rel = std::abs(d.second - ref) / std::abs(ref);
      all_negative = all_negative && d.second < 0.0;
      if (rel >= worst_rel) {
        worst_rel = rel;
        p.worst_i = d.i;
        p.worst_k = d.k;
      }
    }
    p.residual = worst_rel;
    p.tolerance = kClosedFormRelTol;
    p.metrics["max_abs_first"] = v.report.max_abs_first;
    p.metrics["max_second"] = v.report.max_second;
    p.metrics["local_opt_verdict"] = v.verdict ? 1.0 : 0.0;
    p.passed = v.verdict && all_negative && worst_rel <= kClosedFormRelTol;
    rep.per_b[idx] = std::move(p);
  });
  rep.passed = all_passed(rep.per_b);
  return rep;
}

VerificationReport scan_dct(const std::vector<std::size_t>& b_range) {
  VerificationReport rep;
  rep.claim = "dct-scan";
  rep.b_range = b_range;
  rep.per_b.resize(b_range.size());
  for (std::size_t b : b_range)
    if (b < 3) throw Error(ErrorKind::invalid_arguments, "dct-scan starts at b = 3");
  parallel_for(b_range.size(), [&](std::size_t idx) {
    const std::size_t b = b_range[idx];
    PerBResult p;
    p.b = b;
    p.has_pair = true;
    double best = -1.0;
    double best_signed = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      for (std::size_t i = k + 1; i < b; ++i) {
        const double v = dct_first_derivative(b, i, k);
        if (std::abs(v) > best) {
          best = std::abs(v);
          best_signed = v;
          p.worst_i = i;
          p.worst_k = k;
        }
      }
    }
    p.residual = best;
    p.tolerance = kDctThreshold;
    p.metrics["witness_value"] = best_signed;
    p.passed = best > kDctThreshold;
    rep.per_b[idx] = std::move(p);
  });
  rep.passed = all_passed(rep.per_b);
  return rep;
}

TransformComparison compare_transforms(const UnitaryMatrix& a1, const UnitaryMatrix& a2, const SampleSet& test) {
  if (a1.dim() != test.dim() || a2.dim() != test.dim()) {
    throw Error(ErrorKind::invalid_arguments, "transform and test-set dimensions differ");
  }
  TransformComparison c;
  c.per_sample_a1 = per_sample_l4(a1.matrix(), test);
  c.per_sample_a2 = per_sample_l4(a2.matrix(), test);
  c.ratio = pairwise_sum(c.per_sample_a2) / pairwise_sum(c.per_sample_a1);
  return c;
}

}  // namespace l4u
