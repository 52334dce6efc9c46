#include <algorithm>
#include <cmath>
#include <numeric>

#include "l4u/matkit.hpp"

namespace l4u {

namespace {

constexpr double kOrthTol = 1e-14;
constexpr int kMaxSweeps = 60;

// Column-major scratch for the one-sided sweeps.
struct Columns {
  std::size_t rows;
  std::vector<std::vector<cplx>> col;
};

Columns to_columns(const CMatrix& m) {
  Columns c{m.rows(), std::vector<std::vector<cplx>>(m.cols())};
  for (std::size_t j = 0; j < m.cols(); ++j) c.col[j] = m.column(j);
  return c;
}

double norm_sq(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// a_p' = c a_p - s e^{-j phi} a_q,  a_q' = s a_p + c e^{-j phi} a_q
void rotate(std::vector<cplx>& ap, std::vector<cplx>& aq, double c, double s, cplx phase) {
  for (std::size_t i = 0; i < ap.size(); ++i) {
    const cplx x = ap[i];
    const cplx y = aq[i] * phase;
    ap[i] = c * x - s * y;
    aq[i] = s * x + c * y;
  }
}

// Orthonormal completion: fill the columns flagged in `missing` so that the
// full set is orthonormal.
void complete_basis(std::vector<std::vector<cplx>>& u, const std::vector<bool>& missing) {
  const std::size_t m = u.empty() ? 0 : u[0].size();
  std::vector<std::size_t> have;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!missing[j]) have.push_back(j);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!missing[j]) continue;
    std::vector<cplx> best;
    double best_norm = -1.0;
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<cplx> r(m, cplx{});
      r[b] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t h : have) {
          const cplx proj = inner(u[h], r);
          for (std::size_t i = 0; i < m; ++i) r[i] -= proj * u[h][i];
        }
      }
      const double nr = std::sqrt(norm_sq(r));
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(r);
      }
      if (best_norm > 0.7) break;
    }
    for (auto& z : best) z /= best_norm;
    u[j] = std::move(best);
    have.push_back(j);
  }
}

SvdResult svd_tall(const CMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  Columns a = to_columns(m);
  Columns v = to_columns(CMatrix::identity(n));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norm_sq(a.col[p]);
        const double beta = norm_sq(a.col[q]);
        if (alpha == 0.0 || beta == 0.0) continue;
        const cplx gamma = inner(a.col[p], a.col[q]);
        const double g = std::abs(gamma);
        if (g <= kOrthTol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const cplx phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(a.col[p], a.col[q], c, s, phase);
        rotate(v.col[p], v.col[q], c, s, phase);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norm_sq(a.col[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  std::vector<std::vector<cplx>> ucols(rows, std::vector<cplx>(rows));
  std::vector<bool> missing(rows, true);
  SvdResult r{CMatrix(rows, rows), std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    r.sigma[j] = sigma[src];
    if (sigma[src] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) ucols[j][i] = a.col[src][i] / sigma[src];
      missing[j] = false;
    }
    r.v.set_column(j, v.col[src]);
  }
  complete_basis(ucols, missing);
  for (std::size_t j = 0; j < rows; ++j) r.u.set_column(j, ucols[j]);
  return r;
}

}  // namespace

SvdResult svd(const CMatrix& m) {
  if (m.empty()) throw Error(ErrorKind::invalid_dimension, "svd of an empty matrix");
  if (!all_finite(m)) throw Error(ErrorKind::invalid_input, "svd input has non-finite entries");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.adjoint());
  return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

}  // namespace l4u
