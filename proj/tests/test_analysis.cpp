#include <cmath>

#include "doctest.h"
#include "l4u/analysis.hpp"
#include "oracles.hpp"

using namespace l4u;

TEST_CASE("default gains") {
  const auto g = default_gains(3);
  REQUIRE(g.size() == 3);
  CHECK(std::abs(g[0] - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(g[2] - 0.36 * std::polar(1.0, 1.8)) < 1e-15);
}

TEST_CASE("dft-msp analytic") {
  const auto r = verify_dft_msp({2, 4, 8, 16}, 1, {}, MspMode{});
  CHECK(r.claim == "dft-msp");
  CHECK(r.passed);
  REQUIRE(r.per_b.size() == 4);
  for (const auto& p : r.per_b) {
    CHECK(p.residual <= 1e-9);
    CHECK(p.metrics.at("strict_residual") <= 1e-9);
    CHECK(p.tolerance == 1e-9);
  }
}

TEST_CASE("dft-msp Monte Carlo with two paths") {
  MspMode mode;
  mode.kind = MspMode::Kind::monte_carlo;
  mode.samples = 200'000;
  mode.seed = 5;
  const auto r = msp_fixed_point_residual(dft_matrix(8), 2, {}, mode);
  CHECK(r.mc_bound > 0.0);
  CHECK(r.tolerance == doctest::Approx(5 * r.mc_bound));
  INFO("left " << r.residual_left << " right " << r.residual_right << " bound " << r.mc_bound);
  CHECK(r.passed);
  // complex gains give a complex diagonal factor, which the strict test rejects
  CHECK(std::min(r.verdict.residual_left, r.verdict.residual_right) > 3 * r.residual);
  SUBCASE("real gains give a real diagonal factor") {
    const auto s = msp_fixed_point_residual(dft_matrix(8), 2, {cplx(1, 0), cplx(0.6, 0)}, mode);
    CHECK(s.passed);
    CHECK(s.verdict.is_fixed);
  }
}

TEST_CASE("a perturbed DFT is not a fixed point") {
  CounterRng rng(17);
  CMatrix m = dft_matrix(8).matrix();
  CMatrix e = oracle::random_matrix(8, 8, rng);
  e *= 0.05;
  m += e;
  const auto a = project_unitary(m);
  const auto r = msp_fixed_point_residual(a, 1, {}, MspMode{});
  CHECK_FALSE(r.passed);
  CHECK(r.residual > 1e-4);
}

TEST_CASE("dft-ca") {
  std::vector<std::size_t> bs;
  for (std::size_t b = 2; b <= 32; ++b) bs.push_back(b);
  const auto r = verify_dft_ca(bs);
  CHECK(r.passed);
  for (const auto& p : r.per_b) {
    INFO("B = " << p.b);
    CHECK(p.passed);
    CHECK(p.metrics.at("max_abs_first") <= 1e-10);
    CHECK(p.metrics.at("max_second") < 0.0);
  }
  // B = 2: the only pair has second derivative -8 for unit gain
  const auto rep = ca_derivatives(dft_matrix(2), ObjectiveSpec{AnalyticL1Spec{2, 1.0}});
  REQUIRE(rep.pairs.size() == 1);
  CHECK(rep.pairs[0].second == doctest::Approx(-8.0).epsilon(1e-12));
}

TEST_CASE("dct-scan") {
  std::vector<std::size_t> bs;
  for (std::size_t b = 3; b <= 32; ++b) bs.push_back(b);
  const auto r = scan_dct(bs);
  CHECK(r.passed);
  REQUIRE(r.per_b.size() == bs.size());
  for (const auto& p : r.per_b) {
    INFO("B = " << p.b);
    CHECK(p.passed);
    CHECK(p.residual > 1e-6);
    REQUIRE(p.has_pair);
    CHECK(p.worst_i > p.worst_k);
  }
  SUBCASE("witness matches quadrature and is the largest pair") {
    for (std::size_t b : {3u, 5u, 8u, 11u}) {
      const auto& p = r.per_b[b - 3];
      const CMatrix c = dct2_matrix(b).matrix();
      const double q = oracle::dct_first_quadrature(c, p.worst_i, p.worst_k, 128);
      CHECK(std::abs(q - p.metrics.at("witness_value")) <= 1e-9 * std::max(1.0, std::abs(q)));
      CHECK(std::abs(p.residual) == doctest::Approx(std::abs(q)).epsilon(1e-9));
      for (std::size_t i = 1; i < b; ++i)
        for (std::size_t k = 0; k < i; ++k)
          CHECK(std::abs(oracle::dct_first_quadrature(c, i, k, 128)) <= p.residual * (1 + 1e-9));
    }
  }
  CHECK_THROWS_AS(scan_dct({2, 3}), Error);
}

TEST_CASE("compare_transforms") {
  MultipathModel m;
  m.b = 8;
  m.seed = 3;
  const SampleSet test = sample_multipath(m, 2000);
  const auto f = dft_matrix(8);
  const auto same = compare_transforms(f, f, test);
  CHECK(same.ratio == 1.0);
  CHECK(same.per_sample_a1.size() == 2000);

  CounterRng rng(2);
  const auto p = random_cp(8, rng);
  const auto permuted = compare_transforms(f, p * f, test);
  CHECK(permuted.ratio == doctest::Approx(1.0).epsilon(1e-12));
  double s = 0.0;
  for (double v : permuted.per_sample_a2) s += v;
  CHECK(s == doctest::Approx(g_det(p * f, test)).epsilon(1e-10));

  CHECK_THROWS_AS(compare_transforms(f, dft_matrix(4), test), Error);
}
