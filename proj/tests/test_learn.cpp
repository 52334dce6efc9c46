#include <cmath>
#include <numbers>

#include "doctest.h"
#include "l4u/learn.hpp"
#include "oracles.hpp"

using namespace l4u;

namespace {

// P * polar(I + t E), with t chosen by bisection so that the nearest-CP
// distance^2 equals `target`.
UnitaryMatrix perturbed_cp(std::size_t n, double target, CounterRng& rng) {
  const UnitaryMatrix p = random_cp(n, rng);
  const CMatrix e = oracle::random_matrix(n, n, rng);
  auto at = [&](double t) {
    CMatrix m = CMatrix::identity(n);
    CMatrix te = e;
    te *= t;
    m += te;
    return p * project_unitary(m);
  };
  double lo = 0.0, hi = 1.0;
  while (nearest_cp(at(hi)).distance_sq < target) hi *= 2;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (nearest_cp(at(mid)).distance_sq < target ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

bool non_decreasing(const std::vector<double>& v, double rel) {
  for (std::size_t t = 1; t < v.size(); ++t)
    if (v[t] < v[t - 1] - rel * std::abs(v[t - 1])) return false;
  return true;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return frobenius_norm(a - b); }

}  // namespace

TEST_CASE("sym_eigen3") {
  CounterRng rng(1);
  for (int t = 0; t < 50; ++t) {
    PairMatrix m{};
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) m[r][c] = m[c][r] = rng.normal();
    const SymEigen3 e = sym_eigen3(m);
    CHECK(e.values[0] <= e.values[1]);
    CHECK(e.values[1] <= e.values[2]);
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 3; ++r) {
        double mv = 0.0;
        for (int c = 0; c < 3; ++c) mv += m[r][c] * e.vectors[c][j];
        CHECK(std::abs(mv - e.values[j] * e.vectors[r][j]) < 1e-12);
      }
  }
}

TEST_CASE("msp_step") {
  CounterRng rng(2);
  const UnitaryMatrix p = random_cp(5, rng);
  CHECK(max_abs_diff(msp_step(p, pure_gradient(p.matrix())).matrix(), p.matrix()) < 1e-12);
  const UnitaryMatrix a = random_unitary(5, rng);
  std::vector<double> d{0.5, 2.0, 3.0, 0.1, 1.0};
  CHECK(max_abs_diff(msp_step(a, CMatrix::diagonal(std::span<const double>(d)) * a.matrix()).matrix(), a.matrix()) <
        1e-10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.uniform_int(7);
    const UnitaryMatrix x = random_unitary(n, rng);
    const SampleSet y(oracle::random_matrix(n, n + rng.uniform_int(10), rng));
    const UnitaryMatrix nx = msp_step(x, grad_gdet(x.matrix(), y));
    CHECK(g_det(nx, y) >= g_det(x, y) - 1e-12 * g_det(x, y));
  }
  CHECK_THROWS_AS(msp_step(a, CMatrix(5, 5)), Error);
}

TEST_CASE("msp_pure_step") {
  CHECK(max_abs_diff(msp_pure_step(UnitaryMatrix::identity(4)).matrix(), CMatrix::identity(4)) < 1e-14);
  for (std::size_t n : {2u, 5u, 8u}) {
    const UnitaryMatrix f = dft_matrix(n);
    CHECK(max_abs_diff(msp_pure_step(f).matrix(), f.matrix()) < 1e-12);
  }
  CounterRng rng(3);
  for (int t = 0; t < 20; ++t) {
    const UnitaryMatrix a = perturbed_cp(6, 0.1, rng);
    CHECK(std::abs(nearest_cp(a).distance_sq - 0.1) < 1e-9);
    CHECK(nearest_cp(msp_pure_step(a)).distance_sq < 0.1);
  }
}

TEST_CASE("msp_run") {
  CounterRng rng(4);
  SUBCASE("cubic contraction near complex permutations") {
    for (int t = 0; t < 20; ++t) {
      UnitaryMatrix a = perturbed_cp(8, 0.3, rng);
      double prev = nearest_cp(a).distance_sq;
      int iters = 0;
      while (prev > 1e-9 && iters < 6) {
        a = msp_pure_step(a);
        const double d = nearest_cp(a).distance_sq;
        CHECK(d < prev);
        prev = d;
        ++iters;
      }
      CHECK(prev <= 1e-9);
    }
  }
  SUBCASE("pure objective from random starts reaches a complex permutation") {
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + rng.uniform_int(7);
      MspConfig cfg;
      cfg.init = random_unitary(n, rng);
      const LearnResult r = msp_run(cfg, DatasetSpec{SampleSet(CMatrix::identity(n))});
      CHECK(nearest_cp(r.a).distance_sq <= 1e-9);
      CHECK(non_decreasing(r.trace.objective, 1e-12));
    }
  }
  SUBCASE("fixed point start stops after one iteration") {
    MspConfig cfg;
    cfg.init = dft_matrix(8);
    const LearnResult r = msp_run(cfg, AnalyticL1Spec{8, 1.0});
    CHECK(r.trace.terminated_by == Termination::fixed_point);
    CHECK(r.trace.step_norm.size() == 1);
    CHECK(r.trace.step_norm[0] <= cfg.step_tol);
    CHECK(r.trace.objective.size() == 2);
  }
  SUBCASE("dataset objective never decreases") {
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 2 + rng.uniform_int(7);
      MspConfig cfg;
      cfg.init = random_unitary(n, rng);
      cfg.max_iters = 60;
      const SampleSet y(oracle::random_matrix(n, 3 * n, rng));
      const LearnResult r = msp_run(cfg, DatasetSpec{y});
      CHECK(non_decreasing(r.trace.objective, 1e-12));
      CHECK(r.trace.objective.size() == r.trace.step_norm.size() + 1);
      CHECK(unitarity_defect(r.a.matrix()) <= 1e-10);
    }
  }
  SUBCASE("configuration errors") {
    MspConfig cfg;
    cfg.init = UnitaryMatrix::identity(3);
    CHECK_THROWS_AS(msp_run(cfg, AnalyticL1Spec{4, 1.0}), Error);
    cfg.init = UnitaryMatrix::identity(4);
    cfg.max_iters = 0;
    CHECK_THROWS_AS(msp_run(cfg, AnalyticL1Spec{4, 1.0}), Error);
    cfg.max_iters = 5;
    CMatrix zero(4, 2);
    try {
      (void)msp_run(cfg, DatasetSpec{SampleSet(zero)});
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_projection);
    }
  }
}

TEST_CASE("ca_inner") {
  CounterRng rng(5);
  SUBCASE("trivial cases") {
    CMatrix y(2, 1);
    y(0, 0) = 1.0;
    const InnerResult r = ca_inner(UnitaryMatrix::identity(2), 1, 0, DatasetSpec{SampleSet(y)}, 1e-12);
    CHECK(r.gain == 0.0);
    CHECK(r.alpha == 0.0);
    const InnerResult f = ca_inner(dft_matrix(6), 4, 1, AnalyticL1Spec{6, 1.0}, 1e-12);
    CHECK(f.gain <= 1e-12);
    CHECK(std::abs(f.alpha) < 1e-12);
  }
  SUBCASE("matches an exhaustive grid search") {
    for (int t = 0; t < 4; ++t) {
      const std::size_t n = 3 + rng.uniform_int(4);
      const UnitaryMatrix a = random_unitary(n, rng);
      const SampleSet y(oracle::random_matrix(n, 5, rng));
      const std::size_t k = rng.uniform_int(n - 1);
      const std::size_t i = k + 1 + rng.uniform_int(n - 1 - k);
      const InnerResult r = ca_inner(a, i, k, DatasetSpec{y}, 1e-12);
      const CMatrix x = oracle::matmul(a.matrix(), y.matrix());
      std::vector<cplx> xi(x.cols()), xk(x.cols());
      for (std::size_t m = 0; m < x.cols(); ++m) {
        xi[m] = x(i, m);
        xk[m] = x(k, m);
      }
      const auto g = oracle::pair_grid_search(xi, xk, 1.0, 720);
      CHECK(std::abs(r.gain - g.gain) <= 1e-6 * std::max(1.0, g.gain));
      CHECK(r.alpha >= 0.0);
      CHECK(r.alpha <= std::numbers::pi / 4 + 1e-15);
    }
  }
  SUBCASE("reported gain is the realized improvement for every backend") {
    const std::size_t n = 5;
    const UnitaryMatrix a = random_unitary(n, rng);
    const SampleSet y(oracle::random_matrix(n, 7, rng));
    const MonteCarloSpec mc{SinusoidModel{n, 0, std::nullopt, std::nullopt}, 2000, 3};
    for (const ObjectiveSpec& spec :
         {ObjectiveSpec{DatasetSpec{y}}, ObjectiveSpec{mc}, ObjectiveSpec{AnalyticL1Spec{n, 0.9}}}) {
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i) {
          const InnerResult r = ca_inner(a, i, k, spec, 1e-14);
          const UnitaryMatrix b = apply_update(a, {i, k, r.alpha}, {i, r.beta_i}, {k, r.beta_k});
          const double before = evaluate(a.matrix(), spec);
          const double after = evaluate(b.matrix(), spec);
          CHECK(r.gain >= -1e-12);
          CHECK(std::abs((after - before) - r.gain) <= 1e-10 * std::max(1.0, std::abs(before)));
        }
    }
  }
}

TEST_CASE("ca_run") {
  CounterRng rng(6);
  SUBCASE("DFT is a fixed point of the single-path objective") {
    for (std::size_t b : {4u, 8u, 16u}) {
      CaConfig cfg;
      cfg.init = dft_matrix(b);
      const LearnResult r = ca_run(cfg, AnalyticL1Spec{b, 1.0});
      CHECK(r.trace.sweep_gain.at(0) <= 1e-8);
      CHECK(r.trace.terminated_by == Termination::fixed_point);
    }
  }
  SUBCASE("DCT is not a fixed point of the sinusoid model") {
    CaConfig cfg;
    cfg.init = dct2_matrix(8);
    cfg.max_sweeps = 3;
    const MonteCarloSpec mc{SinusoidModel{8, 0, std::nullopt, std::nullopt}, 20'000, 1};
    const LearnResult r = ca_run(cfg, mc);
    CHECK(r.trace.sweep_gain.at(0) > 1e-3);
    CHECK(r.trace.objective.back() > r.trace.objective.front());
  }
  SUBCASE("objective never decreases") {
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 2 + rng.uniform_int(7);
      CaConfig cfg;
      cfg.init = random_unitary(n, rng);
      cfg.max_sweeps = 20;
      const SampleSet y(oracle::random_matrix(n, 4 * n, rng));
      for (const ObjectiveSpec& spec :
           {ObjectiveSpec{DatasetSpec{y}}, ObjectiveSpec{AnalyticL1Spec{n, 1.0}},
            ObjectiveSpec{MonteCarloSpec{MultipathModel{n, 2, {1.0, 0.5}, 0, std::nullopt}, 500, 2}}}) {
        const LearnResult r = ca_run(cfg, spec);
        CHECK(non_decreasing(r.trace.objective, 1e-12));
        CHECK(non_decreasing(r.trace.update_objective, 1e-12));
        CHECK(std::abs(r.trace.objective.back() - evaluate(r.a.matrix(), spec)) <=
              1e-10 * std::abs(r.trace.objective.back()));
        CHECK(unitarity_defect(r.a.matrix()) <= 1e-8);
      }
    }
  }
  SUBCASE("seeded random order is reproducible") {
    CaConfig cfg;
    cfg.init = random_unitary(6, rng);
    cfg.sweep_order = SweepOrder::seeded_random;
    cfg.order_seed = 12;
    cfg.max_sweeps = 5;
    const SampleSet y(oracle::random_matrix(6, 20, rng));
    const LearnResult a = ca_run(cfg, DatasetSpec{y});
    const LearnResult b = ca_run(cfg, DatasetSpec{y});
    CHECK(a.a.matrix() == b.a.matrix());
    CHECK(a.trace.objective == b.trace.objective);
    const auto p0 = sweep_pairs(6, SweepOrder::seeded_random, 12, 0);
    const auto p1 = sweep_pairs(6, SweepOrder::seeded_random, 12, 1);
    CHECK(p0.size() == 15);
    CHECK(p0 != p1);
    const auto lex = sweep_pairs(4, SweepOrder::lexicographic, 0, 0);
    CHECK(lex.front() == std::pair<std::size_t, std::size_t>{1, 0});
    CHECK(lex[1] == std::pair<std::size_t, std::size_t>{2, 0});
    CHECK(lex.back() == std::pair<std::size_t, std::size_t>{3, 2});
  }
}

TEST_CASE("check_msp_fixed_point") {
  for (std::size_t b : {2u, 4u, 8u, 16u}) {
    const UnitaryMatrix f = dft_matrix(b);
    const auto v = check_msp_fixed_point(f, grad_analytic_L1(f.matrix(), 1.0));
    CHECK(v.is_fixed);
    // the single-path gradient factors as A D (column scaling)
    CHECK(v.residual_right <= 1e-9);
  }
  CMatrix two = CMatrix::identity(3);
  two *= 2.0;
  CHECK(check_msp_fixed_point(UnitaryMatrix::identity(3), two).is_fixed);
  CounterRng rng(7);
  for (int t = 0; t < 100; ++t) {
    const UnitaryMatrix a = random_unitary(5, rng);
    const auto v = check_msp_fixed_point(a, oracle::random_matrix(5, 5, rng));
    CHECK_FALSE(v.is_fixed);
    CHECK(std::min(v.residual_left, v.residual_right) > 1e-3);
  }
  // invariance under a -> P a with the gradient transformed alongside
  const UnitaryMatrix a = random_unitary(6, rng);
  const CMatrix g = oracle::random_matrix(6, 6, rng);
  const UnitaryMatrix p = random_cp(6, rng);
  const auto v0 = check_msp_fixed_point(a, g);
  const auto v1 = check_msp_fixed_point(p * a, p.matrix() * g);
  CHECK(std::abs(v0.residual_left - v1.residual_left) < 1e-12);
  CHECK(std::abs(v0.residual_right - v1.residual_right) < 1e-12);
}

TEST_CASE("check_ca_local_opt") {
  SUBCASE("DFT under the single-path model") {
    for (std::size_t b = 2; b <= 32; b += 5) {
      const double c = 1.3;
      const auto v = check_ca_local_opt(dft_matrix(b), AnalyticL1Spec{b, c});
      CHECK(v.verdict);
      for (const auto& p : v.report.pairs) {
        const double d1 = std::pow(c, 4) * d1_closed_form(b, p.i, p.k);
        CHECK(std::abs(p.second - d1) <= 1e-6 * std::abs(d1));
      }
    }
  }
  SUBCASE("aligned one-sparse data and degenerate data") {
    const auto ok = check_ca_local_opt(UnitaryMatrix::identity(4), DatasetSpec{SampleSet(CMatrix::identity(4))});
    CHECK(ok.verdict);
    for (const auto& p : ok.report.pairs) CHECK(p.second == doctest::Approx(-8.0));
    const auto deg = check_ca_local_opt(UnitaryMatrix::identity(4), DatasetSpec{SampleSet(CMatrix(4, 3))});
    CHECK_FALSE(deg.verdict);
    CHECK(deg.degenerate);
  }
  SUBCASE("DCT under the sinusoid model") {
    const auto v = check_ca_local_opt(
        dct2_matrix(8), MonteCarloSpec{SinusoidModel{8, 0, std::nullopt, std::nullopt}, 100'000, 2});
    CHECK_FALSE(v.verdict);
    CHECK(v.report.max_abs_first > 1e-6);
  }
}
