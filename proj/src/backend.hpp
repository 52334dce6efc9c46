#pragma once

// Internal: a resolved objective backend used by the learners, so Monte-Carlo
// samples are drawn once per run instead of once per evaluation.

#include "l4u/objective.hpp"

namespace l4u::detail {

class Backend {
 public:
  explicit Backend(const ObjectiveSpec& spec) {
    validate(spec);
    dim_ = spec_dim(spec);
    if (const auto* s = std::get_if<AnalyticL1Spec>(&spec)) {
      analytic_ = true;
      c_mag_ = s->c_mag;
    } else {
      samples_ = sample_backend(spec);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  bool analytic() const noexcept { return analytic_; }
  double c_mag() const noexcept { return c_mag_; }
  double weight() const noexcept { return samples_.weight; }
  const SampleSet& samples() const { return *samples_.samples; }

  double value(const CMatrix& a) const {
    if (analytic()) return g_analytic_L1(a, dim_, c_mag_);
    return samples_.weight * g_det(a, *samples_.samples);
  }

  CMatrix grad(const CMatrix& a) const {
    if (analytic()) return grad_analytic_L1(a, c_mag_);
    CMatrix g = grad_gdet(a, *samples_.samples);
    if (samples_.weight != 1.0) g *= samples_.weight;
    return g;
  }

 private:
  std::size_t dim_ = 0;
  bool analytic_ = false;
  double c_mag_ = 0.0;
  SampleBackend samples_;
};

}  // namespace l4u::detail
