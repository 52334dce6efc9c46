#include <cmath>
#include <string>

#include "backend.hpp"
#include "l4u/learn.hpp"

namespace l4u {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::step_tol: return "step_tol";
    case Termination::obj_tol: return "obj_tol";
    case Termination::max_iters: return "max_iters";
    case Termination::fixed_point: return "fixed_point";
  }
  return "unknown";
}

UnitaryMatrix msp_step(const UnitaryMatrix& a, const CMatrix& grad) {
  if (grad.rows() != a.dim() || grad.cols() != a.dim()) {
    throw Error(ErrorKind::invalid_arguments, "gradient shape does not match the transform");
  }
  return project_unitary(grad);
}

UnitaryMatrix msp_pure_step(const UnitaryMatrix& a) { return project_unitary(pure_gradient(a.matrix())); }

LearnResult msp_run(const MspConfig& cfg, const ObjectiveSpec& spec) {
  if (cfg.max_iters == 0) throw Error(ErrorKind::invalid_arguments, "max_iters must be >= 1");
  if (!(cfg.step_tol > 0.0) || !(cfg.obj_tol > 0.0)) {
    throw Error(ErrorKind::invalid_arguments, "tolerances must be positive");
  }
  const detail::Backend be(spec);
  if (be.dim() != cfg.init.dim()) {
    throw Error(ErrorKind::invalid_arguments, "initial transform is " + std::to_string(cfg.init.dim()) +
                                                  "-dimensional but the objective is " +
                                                  std::to_string(be.dim()) + "-dimensional");
  }

  LearnResult out{cfg.init, {}};
  double f = be.value(out.a.matrix());
  out.trace.objective.push_back(f);
  out.trace.terminated_by = Termination::max_iters;
  for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
    UnitaryMatrix next = msp_step(out.a, be.grad(out.a.matrix()));
    const double step = frobenius_norm(next.matrix() - out.a.matrix());
    const double fn = be.value(next.matrix());
    out.trace.step_norm.push_back(step);
    out.trace.objective.push_back(fn);
    out.a = std::move(next);
    if (step <= cfg.step_tol) {
      out.trace.terminated_by = t == 1 ? Termination::fixed_point : Termination::step_tol;
      break;
    }
    if (std::abs(fn - f) <= cfg.obj_tol * std::max(std::abs(f), 1e-300)) {
      out.trace.terminated_by = Termination::obj_tol;
      break;
    }
    f = fn;
  }
  return out;
}

FixedPointVerdict check_msp_fixed_point(const UnitaryMatrix& a, const CMatrix& grad, double tol) {
  if (grad.rows() != a.dim() || grad.cols() != a.dim()) {
    throw Error(ErrorKind::invalid_arguments, "gradient shape does not match the transform");
  }
  auto off_part = [](const CMatrix& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
      for (std::size_t j = 0; j < p.cols(); ++j) {
        s += i == j ? p(i, j).imag() * p(i, j).imag() : std::norm(p(i, j));
      }
    }
    return std::sqrt(s);
  };
  const double gn = frobenius_norm(grad);
  FixedPointVerdict v;
  v.tol = tol;
  if (gn > 0.0) {
    const CMatrix ah = a.matrix().adjoint();
    v.residual_left = off_part(grad * ah) / gn;
    v.residual_right = off_part(ah * grad) / gn;
  }
  v.is_fixed = std::min(v.residual_left, v.residual_right) <= tol;
  return v;
}

}  // namespace l4u
