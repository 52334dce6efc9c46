#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "l4u/matkit.hpp"
#include "l4u/matrix_io.hpp"
#include "l4u/rng.hpp"
#include "oracles.hpp"

using namespace l4u;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

CMatrix diag_real(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return CMatrix::diagonal(std::span<const double>(v));
}

}  // namespace

TEST_CASE("philox known answers") {
  const auto z = CounterRng::philox({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);
  const auto f = CounterRng::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                    {0xffffffffu, 0xffffffffu});
  CHECK(f[0] == 0x408f276du);
  CHECK(f[1] == 0x41c83b0eu);
  CHECK(f[2] == 0xa20bc7c6u);
  CHECK(f[3] == 0x6d5451fdu);
}

TEST_CASE("counter rng streams are reproducible and distinct") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterRng s1 = CounterRng(42).substream(1), s2 = CounterRng(42).substream(2);
  CHECK(s1.next_u64() != s2.next_u64());
  CounterRng u(7);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    mean += x;
  }
  CHECK(std::abs(mean / 20000 - 0.5) < 0.01);
  CounterRng g(9);
  double s2sum = 0.0;
  for (int i = 0; i < 20000; ++i) s2sum += std::norm(g.complex_normal(2.0));
  CHECK(std::abs(s2sum / 20000 - 2.0) < 0.1);
}

TEST_CASE("dimension and input errors") {
  CHECK_THROWS_AS(CMatrix(0, 3), Error);
  try {
    (void)dft_matrix(0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_dimension);
  }
  CHECK_THROWS_AS(dct2_matrix(0), Error);
  CMatrix bad(2, 2);
  bad(0, 0) = std::nan("");
  try {
    (void)svd(bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
  try {
    (void)UnitaryMatrix::from(diag_real({2.0, 1.0}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
}

TEST_CASE("dft matrix") {
  CHECK(dft_matrix(1).matrix()(0, 0) == cplx(1.0, 0.0));
  const CMatrix f2 = dft_matrix(2).matrix();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2(0, 0) - r) < 1e-15);
  CHECK(std::abs(f2(0, 1) - r) < 1e-15);
  CHECK(std::abs(f2(1, 0) - r) < 1e-15);
  CHECK(std::abs(f2(1, 1) + r) < 1e-15);
  const UnitaryMatrix f8 = dft_matrix(8);
  CHECK(unitarity_defect(f8.matrix()) <= 1e-12);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t k = 0; k < 8; ++k) {
      const cplx expect = std::polar(1.0 / std::sqrt(8.0), -2 * std::numbers::pi * double(i * k) / 8.0);
      CHECK(std::abs(f8.matrix()(i, k) - expect) < 1e-14);
    }
}

TEST_CASE("dct matrix") {
  CHECK(std::abs(dct2_matrix(1).matrix()(0, 0) - 1.0) < 1e-15);
  const CMatrix c2 = dct2_matrix(2).matrix();
  CHECK(std::abs(c2(0, 0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(c2(0, 1) - 1 / std::sqrt(2.0)) < 1e-15);
  const CMatrix c16 = dct2_matrix(16).matrix();
  CHECK(unitarity_defect(c16) <= 1e-12);
  for (const auto& z : c16.data()) CHECK(z.imag() == 0.0);
}

TEST_CASE("l4 norm bounds and invariance") {
  CHECK(std::abs(l4_norm4(CMatrix::identity(5)) - 5.0) < 1e-15);
  CHECK(std::abs(l4_norm4(dft_matrix(16).matrix()) - 1.0) < 1e-12);
  CounterRng rng(3);
  for (int t = 0; t < 20; ++t) {
    const UnitaryMatrix a = random_unitary(8, rng);
    const double v = l4_norm4(a.matrix());
    CHECK(v >= 1.0 - 1e-9);
    CHECK(v <= 8.0 + 1e-9);
    const UnitaryMatrix p = random_cp(8, rng), q = random_cp(8, rng);
    const double w = l4_norm4(p.matrix() * a.matrix() * q.matrix());
    CHECK(std::abs(w - v) <= 1e-13 * v);
  }
}

TEST_CASE("svd") {
  SUBCASE("identity") {
    const auto r = svd(CMatrix::identity(4));
    for (double s : r.sigma) CHECK(std::abs(s - 1.0) < 1e-15);
  }
  SUBCASE("diagonal") {
    const auto r = svd(diag_real({2.0, 3.0}));
    CHECK(std::abs(r.sigma[0] - 3.0) < 1e-15);
    CHECK(std::abs(r.sigma[1] - 2.0) < 1e-15);
  }
  SUBCASE("random reconstruction, square and rectangular") {
    CounterRng rng(11);
    for (auto [r, c] : {std::pair{8, 8}, std::pair{6, 3}, std::pair{3, 7}, std::pair{16, 16}}) {
      const CMatrix m = oracle::random_matrix(r, c, rng);
      const auto s = svd(m);
      CHECK(unitarity_defect(s.u) <= 1e-10);
      CHECK(unitarity_defect(s.v) <= 1e-10);
      for (std::size_t j = 0; j + 1 < s.sigma.size(); ++j) CHECK(s.sigma[j] >= s.sigma[j + 1]);
      CMatrix sig(r, c);
      for (std::size_t j = 0; j < s.sigma.size(); ++j) sig(j, j) = s.sigma[j];
      const CMatrix rec = oracle::matmul(oracle::matmul(s.u, sig), s.v.adjoint());
      CHECK(frobenius_norm(rec - m) <= 1e-9 * frobenius_norm(m));
    }
  }
  SUBCASE("rank deficient input gets a complete unitary U") {
    CMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 0) = 2.0;
    const auto s = svd(m);
    CHECK(unitarity_defect(s.u) <= 1e-10);
    CHECK(s.sigma[1] == 0.0);
  }
}

TEST_CASE("project_unitary") {
  CounterRng rng(5);
  const UnitaryMatrix a = random_unitary(6, rng);
  CHECK(max_abs_diff(project_unitary(a.matrix()).matrix(), a.matrix()) < 1e-10);
  CHECK(max_abs_diff(project_unitary(diag_real({2.0, 0.5})).matrix(), CMatrix::identity(2)) < 1e-14);
  const CMatrix d = diag_real({3.0, 0.2, 1.0, 7.0, 0.9, 2.0});
  CHECK(max_abs_diff(project_unitary(d * a.matrix()).matrix(), a.matrix()) < 1e-9);
  CHECK(max_abs_diff(project_unitary(a.matrix() * d).matrix(), a.matrix()) < 1e-9);
  const CMatrix m = oracle::random_matrix(6, 6, rng);
  const UnitaryMatrix p = project_unitary(m);
  CHECK(max_abs_diff(project_unitary(p.matrix()).matrix(), p.matrix()) < 1e-10);
  // the polar factor maximizes Re tr(W^H M) over unitaries W
  double tr = 0.0;
  const CMatrix pm = p.matrix().adjoint() * m;
  for (std::size_t i = 0; i < 6; ++i) tr += pm(i, i).real();
  for (int t = 0; t < 20; ++t) {
    const CMatrix w = random_unitary(6, rng).matrix().adjoint() * m;
    double tw = 0.0;
    for (std::size_t i = 0; i < 6; ++i) tw += w(i, i).real();
    CHECK(tw <= tr + 1e-12);
  }
  CMatrix sing(3, 3);
  sing(0, 0) = 1.0;
  sing(1, 1) = 1.0;
  try {
    (void)project_unitary(sing);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_projection);
  }
}

TEST_CASE("apply_update") {
  const UnitaryMatrix i2 = UnitaryMatrix::identity(2);
  const UnitaryMatrix same = apply_update(i2, {1, 0, 0.0}, {1, 0.0}, {0, 0.0});
  CHECK(same.matrix() == i2.matrix());
  // x'_1 = c x_1 + s x_0: the first row picks up -sin in column 1 of row 0
  const CMatrix r = apply_update(i2, {1, 0, std::numbers::pi / 2}, {1, 0.0}, {0, 0.0}).matrix();
  CHECK(std::abs(r(0, 0)) < 1e-15);
  CHECK(std::abs(r(0, 1) - cplx(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(r(1, 0) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(r(1, 1)) < 1e-15);

  CounterRng rng(8);
  UnitaryMatrix a = random_unitary(7, rng);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = rng.uniform_int(6);
    const std::size_t i = k + 1 + rng.uniform_int(6 - k);
    const double al = rng.uniform(-3, 3), bi = rng.uniform(-3, 3), bk = rng.uniform(-3, 3);
    const UnitaryMatrix b = apply_update(a, {i, k, al}, {i, bi}, {k, bk});
    const CMatrix expect = oracle::matmul(
        oracle::matmul(oracle::matmul(oracle::givens(7, i, k, al), oracle::phase(7, i, bi)), oracle::phase(7, k, bk)),
        a.matrix());
    CHECK(max_abs_diff(b.matrix(), expect) < 1e-13);
    for (std::size_t row = 0; row < 7; ++row) {
      if (row == i || row == k) continue;
      for (std::size_t c = 0; c < 7; ++c) CHECK(b.matrix()(row, c) == a.matrix()(row, c));
    }
    CHECK(unitarity_defect(b.matrix()) <= 1e-11);
    CHECK(std::abs(b.unitarity_defect() - unitarity_defect(b.matrix())) < 1e-12);
    a = b;
  }
  CHECK_THROWS_AS(apply_update(a, {3, 1, 0.1}, {2, 0.0}, {1, 0.0}), Error);
  CHECK_THROWS_AS(apply_update(a, {1, 3, 0.1}, {1, 0.0}, {3, 0.0}), Error);
}

TEST_CASE("nearest_cp") {
  const std::vector<std::size_t> perm{2, 0, 1};
  const std::vector<double> ph{0.3, -1.0, 2.0};
  const auto cp = nearest_cp(cp_matrix(perm, ph));
  CHECK(cp.distance_sq <= 1e-18);
  CHECK(cp.is_permutation);
  CHECK(cp.perm == perm);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(cp.phases[j] - ph[j]) < 1e-15);

  const auto f2 = nearest_cp(dft_matrix(2));
  CHECK(std::abs(f2.distance_sq - (4 - 2 * std::sqrt(2.0))) < 1e-14);
  CHECK(f2.perm[0] == 0);
  CHECK(f2.perm[1] == 0);  // tie goes to the lower row
  CHECK_FALSE(f2.is_permutation);

  // near-CP matrices satisfying the sparsity precondition
  CounterRng rng(21);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 6;
    const UnitaryMatrix p = random_cp(n, rng);
    CMatrix e = oracle::random_matrix(n, n, rng);
    e *= 0.02;
    const UnitaryMatrix w = project_unitary(p.matrix() + e);
    const double eps = 1.0 - l4_norm4(w.matrix()) / double(n);
    if (eps >= (1 - 1 / std::sqrt(2.0)) / double(n)) continue;
    const auto r = nearest_cp(w);
    CHECK(r.is_permutation);
    CHECK(r.distance_sq / double(n) <= 2 * eps + 1e-15);
  }
}

TEST_CASE("cmx1 and csv round trip") {
  CounterRng rng(4);
  const CMatrix m = oracle::random_matrix(3, 5, rng);
  std::stringstream bin;
  write_cmx1(bin, m);
  CHECK(read_cmx1(bin) == m);

  std::stringstream txt;
  write_csv(txt, m);
  CHECK(read_csv(txt) == m);

  CHECK(parse_complex("1.5-2j") == cplx(1.5, -2));
  CHECK(parse_complex("-1e-3+4.5e+2j") == cplx(-1e-3, 450));
  CHECK(parse_complex("3") == cplx(3, 0));
  CHECK(parse_complex("-j") == cplx(0, -1));
  CHECK(parse_complex("2.5i") == cplx(0, 2.5));
  CHECK_THROWS_AS(parse_complex("abc"), Error);

  try {
    std::stringstream full;
    write_cmx1(full, m);
    std::stringstream cut(full.str().substr(0, full.str().size() - 3));
    (void)read_cmx1(cut);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format_error);
  }
  std::stringstream junk("CMX2abcdefgh");
  CHECK_THROWS_AS(read_cmx1(junk), Error);
}
