#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "backend.hpp"
#include "l4u/learn.hpp"
#include "l4u/rng.hpp"

namespace l4u {

SymEigen3 sym_eigen3(const PairMatrix& m) {
  auto a = m;
  std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
    if (off <= 1e-32 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < 3; ++r) {
          const double arp = a[r][p];
          const double arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (int r = 0; r < 3; ++r) {
          const double apr = a[p][r];
          const double aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
        for (int r = 0; r < 3; ++r) {
          const double vrp = v[r][p];
          const double vrq = v[r][q];
          v[r][p] = c * vrp - s * vrq;
          v[r][q] = s * vrp + c * vrq;
        }
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
  SymEigen3 out;
  for (int j = 0; j < 3; ++j) {
    out.values[j] = a[order[j]][order[j]];
    for (int r = 0; r < 3; ++r) out.vectors[r][j] = v[r][order[j]];
  }
  return out;
}

InnerResult ca_inner_from_moments(const PairMatrix& m, double tol) {
  const SymEigen3 e = sym_eigen3(m);
  std::array<double, 3> v = {e.vectors[0][2], e.vectors[1][2], e.vectors[2][2]};
  if (v[0] < 0.0) {
    for (auto& x : v) x = -x;
  }
  // gain of the exact eigenvector; the Rayleigh quotient keeps it consistent
  // with the angles actually returned
  double quad = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) quad += v[r] * m[r][c] * v[c];
  const double norm2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double gain = 2.0 * (quad / norm2 - m[0][0]);
  InnerResult r;
  if (!(gain > tol)) return r;
  const double v1 = std::clamp(v[0] / std::sqrt(norm2), -1.0, 1.0);
  r.alpha = 0.5 * std::acos(v1);
  r.beta_i = std::atan2(v[2], v[1]);
  r.beta_k = 0.0;
  r.gain = gain;
  return r;
}

InnerResult ca_inner(const UnitaryMatrix& a, std::size_t i, std::size_t k, const ObjectiveSpec& spec,
                     double tol) {
  if (i <= k || i >= a.dim()) throw Error(ErrorKind::invalid_arguments, "pair needs k < i < N");
  return ca_inner_from_moments(pair_matrix(a.matrix(), i, k, spec), tol);
}

std::vector<std::pair<std::size_t, std::size_t>> sweep_pairs(std::size_t n, SweepOrder order,
                                                             std::uint64_t seed, std::size_t sweep) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) pairs.emplace_back(i, k);
  if (order == SweepOrder::seeded_random) {
    CounterRng rng = CounterRng(seed).substream(sweep);
    for (std::size_t j = pairs.size(); j > 1; --j) std::swap(pairs[j - 1], pairs[rng.uniform_int(j)]);
  }
  return pairs;
}

namespace {

void update_rows(CMatrix& x, std::size_t i, std::size_t k, const InnerResult& u) {
  const double c = std::cos(u.alpha);
  const double s = std::sin(u.alpha);
  const cplx pi = std::polar(1.0, u.beta_i);
  const cplx pk = std::polar(1.0, u.beta_k);
  auto ri = x.row(i);
  auto rk = x.row(k);
  for (std::size_t m = 0; m < ri.size(); ++m) {
    const cplx a = pi * ri[m];
    const cplx b = pk * rk[m];
    ri[m] = c * a + s * b;
    rk[m] = -s * a + c * b;
  }
}

}  // namespace

LearnResult ca_run(const CaConfig& cfg, const ObjectiveSpec& spec) {
  if (cfg.max_sweeps == 0) throw Error(ErrorKind::invalid_arguments, "max_sweeps must be >= 1");
  if (!(cfg.inner_tol > 0.0) || !(cfg.improvement_tol > 0.0)) {
    throw Error(ErrorKind::invalid_arguments, "tolerances must be positive");
  }
  const detail::Backend be(spec);
  const std::size_t n = be.dim();
  if (n != cfg.init.dim()) {
    throw Error(ErrorKind::invalid_arguments, "initial transform is " + std::to_string(cfg.init.dim()) +
                                                  "-dimensional but the objective is " +
                                                  std::to_string(n) + "-dimensional");
  }

  LearnResult out{cfg.init, {}};
  CMatrix x;
  if (!be.analytic()) x = out.a.matrix() * be.samples().matrix();
  auto moments = [&](std::size_t i, std::size_t k) {
    if (be.analytic()) return pair_matrix_analytic(out.a.matrix(), i, k, be.c_mag());
    return pair_matrix_from_rows(x.row(i), x.row(k), be.weight());
  };

  double f = be.value(out.a.matrix());
  out.trace.objective.push_back(f);
  out.trace.update_objective.push_back(f);
  out.trace.terminated_by = Termination::max_iters;
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const CMatrix start = out.a.matrix();
    double sweep_gain = 0.0;
    for (const auto& [i, k] : sweep_pairs(n, cfg.sweep_order, cfg.order_seed, sweep)) {
      const InnerResult u = ca_inner_from_moments(moments(i, k), cfg.inner_tol);
      if (u.gain <= 0.0) continue;
      out.a = apply_update(out.a, {i, k, u.alpha}, {i, u.beta_i}, {k, u.beta_k});
      if (!be.analytic()) update_rows(x, i, k, u);
      sweep_gain += u.gain;
      out.trace.update_objective.push_back(out.trace.update_objective.back() + u.gain);
    }
    if (out.a.unitarity_defect() > UnitaryMatrix::kReprojectDefect) {
      out.a = out.a.renormalize();
      if (!be.analytic()) x = out.a.matrix() * be.samples().matrix();
      ++out.trace.reprojections;
    }
    f = be.value(out.a.matrix());
    out.trace.objective.push_back(f);
    out.trace.step_norm.push_back(frobenius_norm(out.a.matrix() - start));
    out.trace.sweep_gain.push_back(sweep_gain);
    if (sweep_gain <= cfg.improvement_tol) {
      out.trace.terminated_by = sweep == 0 ? Termination::fixed_point : Termination::obj_tol;
      break;
    }
  }
  return out;
}

LocalOptVerdict check_ca_local_opt(const UnitaryMatrix& a, const ObjectiveSpec& spec, double tol) {
  LocalOptVerdict v;
  v.report = ca_derivatives(a, spec);
  v.degenerate = std::all_of(v.report.pairs.begin(), v.report.pairs.end(),
                             [](const PairDerivative& p) { return p.second == 0.0; });
  const bool firsts = v.report.max_abs_first <= tol;
  const bool seconds = std::all_of(v.report.pairs.begin(), v.report.pairs.end(),
                                   [tol](const PairDerivative& p) { return p.second < -tol; });
  v.verdict = !v.report.pairs.empty() && firsts && seconds && !v.degenerate;
  return v;
}

}  // namespace l4u
