#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "l4u/matkit.hpp"
#include "l4u/rng.hpp"

namespace l4u {

namespace detail {

struct UnitaryAccess {
  static UnitaryMatrix make(CMatrix m) {
    const double d = l4u::unitarity_defect(m);
    return UnitaryMatrix(std::move(m), d);
  }
  static UnitaryMatrix make(CMatrix m, double defect) { return UnitaryMatrix(std::move(m), defect); }
};

}  // namespace detail

namespace {

using detail::UnitaryAccess;

void check_rows(const CMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (const auto& z : m.row(i)) s += std::norm(z);
    if (std::abs(std::sqrt(s) - 1.0) > tol) {
      throw Error(ErrorKind::invalid_input, "row " + std::to_string(i) + " does not have unit norm");
    }
  }
}

// Gram-matrix contribution of rows i and k to ||A A^H - I||_F^2. For square A
// this equals the contribution to ||A^H A - I||_F^2 since both Gram matrices
// share their eigenvalues.
double pair_gram_contribution(const CMatrix& a, std::size_t i, std::size_t k) {
  const std::size_t n = a.rows();
  auto dot = [&](std::size_t p, std::size_t q) {
    cplx s{};
    auto rp = a.row(p);
    auto rq = a.row(q);
    for (std::size_t j = 0; j < n; ++j) s += rp[j] * std::conj(rq[j]);
    return s;
  };
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i || j == k) continue;
    acc += 2.0 * (std::norm(dot(i, j)) + std::norm(dot(k, j)));
  }
  acc += std::norm(dot(i, i) - 1.0) + std::norm(dot(k, k) - 1.0) + 2.0 * std::norm(dot(i, k));
  return acc;
}

}  // namespace

UnitaryMatrix UnitaryMatrix::from(CMatrix m, double tol) {
  if (m.empty() || !m.is_square()) {
    throw Error(ErrorKind::invalid_dimension, "unitary matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "matrix has non-finite entries");
  const double d = l4u::unitarity_defect(m);
  if (d > tol) {
    throw Error(ErrorKind::invalid_input,
                "unitarity defect " + std::to_string(d) + " exceeds tolerance");
  }
  check_rows(m, tol);
  return UnitaryAccess::make(std::move(m), d);
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n) {
  return UnitaryAccess::make(CMatrix::identity(n), 0.0);
}

UnitaryMatrix UnitaryMatrix::renormalize() const { return project_unitary(m_); }

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return UnitaryAccess::make(a.matrix() * b.matrix());
}

CMatrix givens_matrix(std::size_t n, const GivensRotation& g) {
  if (g.i <= g.k || g.i >= n) throw Error(ErrorKind::invalid_arguments, "Givens indices need k < i < n");
  CMatrix m = CMatrix::identity(n);
  const double c = std::cos(g.alpha);
  const double s = std::sin(g.alpha);
  m(g.i, g.i) = c;
  m(g.k, g.k) = c;
  m(g.i, g.k) = s;
  m(g.k, g.i) = -s;
  return m;
}

CMatrix phase_matrix(std::size_t n, const PhaseShift& p) {
  if (p.k >= n) throw Error(ErrorKind::invalid_arguments, "phase index out of range");
  CMatrix m = CMatrix::identity(n);
  m(p.k, p.k) = std::polar(1.0, p.beta);
  return m;
}

UnitaryMatrix apply_update(const UnitaryMatrix& a, const GivensRotation& g, const PhaseShift& bi,
                           const PhaseShift& bk) {
  const std::size_t n = a.dim();
  if (g.i <= g.k || g.i >= n) throw Error(ErrorKind::invalid_arguments, "Givens indices need k < i < n");
  if (bi.k != g.i || bk.k != g.k) {
    throw Error(ErrorKind::invalid_arguments, "phase shift indices must match the rotation pair");
  }
  if (!std::isfinite(g.alpha) || !std::isfinite(bi.beta) || !std::isfinite(bk.beta)) {
    throw Error(ErrorKind::invalid_arguments, "update angles must be finite");
  }
  CMatrix m = a.matrix();
  const double before = pair_gram_contribution(m, g.i, g.k);
  const double c = std::cos(g.alpha);
  const double s = std::sin(g.alpha);
  const cplx pi = std::polar(1.0, bi.beta);
  const cplx pk = std::polar(1.0, bk.beta);
  auto ri = m.row(g.i);
  auto rk = m.row(g.k);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx xi = pi * ri[j];
    const cplx xk = pk * rk[j];
    ri[j] = c * xi + s * xk;
    rk[j] = -s * xi + c * xk;
  }
  const double after = pair_gram_contribution(m, g.i, g.k);
  const double d0 = a.unitarity_defect();
  const double d2 = std::max(0.0, d0 * d0 - before + after);
  return UnitaryAccess::make(std::move(m), std::sqrt(d2));
}

UnitaryMatrix dft_matrix(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "dft size must be positive");
  CMatrix m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      // reduce the exponent first so large products keep full accuracy
      const std::size_t r = (i * k) % n;
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
      m(i, k) = std::polar(scale, ang);
    }
  }
  return UnitaryAccess::make(std::move(m));
}

UnitaryMatrix dct2_matrix(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "dct size must be positive");
  CMatrix m(n, n);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::sqrt(2.0 / nd) / (k == 0 ? std::numbers::sqrt2 : 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) = scale * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) *
                                 static_cast<double>(k) / nd);
    }
  }
  return UnitaryAccess::make(std::move(m));
}

UnitaryMatrix cp_matrix(std::span<const std::size_t> perm, std::span<const double> phases) {
  const std::size_t n = perm.size();
  if (n == 0 || phases.size() != n) {
    throw Error(ErrorKind::invalid_dimension, "permutation and phase lists must match and be non-empty");
  }
  std::vector<bool> seen(n, false);
  CMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (perm[k] >= n || seen[perm[k]]) throw Error(ErrorKind::invalid_arguments, "not a permutation");
    seen[perm[k]] = true;
    m(perm[k], k) = std::polar(1.0, phases[k]);
  }
  return UnitaryAccess::make(std::move(m), 0.0);
}

UnitaryMatrix random_unitary(std::size_t n, CounterRng& rng) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "size must be positive");
  CMatrix g(n, n);
  for (auto& z : g.data()) z = rng.complex_normal(1.0);
  return project_unitary(g);
}

UnitaryMatrix random_cp(std::size_t n, CounterRng& rng) {
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "size must be positive");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t j = n; j > 1; --j) std::swap(perm[j - 1], perm[rng.uniform_int(j)]);
  std::vector<double> phases(n);
  for (auto& p : phases) p = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return cp_matrix(perm, phases);
}

UnitaryMatrix project_unitary(const CMatrix& m) {
  if (m.empty() || !m.is_square()) {
    throw Error(ErrorKind::invalid_dimension, "projection needs a square matrix");
  }
  const SvdResult r = svd(m);
  const double smax = r.sigma.front();
  const double smin = r.sigma.back();
  if (!(smax > 0.0) || smin < 1e-12 * smax) {
    throw Error(ErrorKind::degenerate_projection,
                "smallest singular value " + std::to_string(smin) + " is below 1e-12 of the largest");
  }
  return UnitaryAccess::make(r.u * r.v.adjoint());
}

CpProjection nearest_cp(const CMatrix& w) {
  if (w.empty() || !w.is_square()) throw Error(ErrorKind::invalid_dimension, "nearest_cp needs a square matrix");
  const std::size_t n = w.rows();
  CpProjection out;
  out.perm.resize(n);
  out.phases.resize(n);
  std::vector<bool> used(n, false);
  out.is_permutation = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = 0;
    double best_abs = std::abs(w(0, k));
    for (std::size_t i = 1; i < n; ++i) {
      const double v = std::abs(w(i, k));
      // near-ties (rounding level) resolve to the lower row index
      if (v > best_abs * (1.0 + 1e-12)) {
        best = i;
        best_abs = v;
      }
    }
    out.perm[k] = best;
    out.phases[k] = std::arg(w(best, k));
    if (used[best]) out.is_permutation = false;
    used[best] = true;
    const cplx target = std::polar(1.0, out.phases[k]);
    for (std::size_t i = 0; i < n; ++i) {
      out.distance_sq += std::norm(w(i, k) - (i == best ? target : cplx{}));
    }
  }
  return out;
}

CpProjection nearest_cp(const UnitaryMatrix& w) { return nearest_cp(w.matrix()); }

}  // namespace l4u
