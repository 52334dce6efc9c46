// Exact expectations under the single-path model y_b = c exp(j Omega b).
//
// With E[exp(j Omega t)] = [t == 0] for integer t, every fourth moment of
// x = A y reduces to lag correlations of the rows of A:
//   u_ab(t) = sum_{p - q = t} A_ap conj(A_bq),
//   E[x_a conj(x_b) x_c conj(x_d)] = |c|^4 sum_t u_ab(t) u_cd(-t).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "l4u/objective.hpp"

namespace l4u {

namespace {

// Index t + (B - 1) for lags t in [-(B-1), B-1].
std::vector<cplx> lag_correlation(const CMatrix& a, std::size_t ra, std::size_t rb) {
  const std::size_t n = a.cols();
  std::vector<cplx> u(2 * n - 1, cplx{});
  auto xa = a.row(ra);
  auto xb = a.row(rb);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) u[p + n - 1 - q] += xa[p] * std::conj(xb[q]);
  return u;
}

// sum_t u(t) v(-t)
cplx lag_contract(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  const std::size_t len = u.size();
  cplx s{};
  for (std::size_t t = 0; t < len; ++t) s += u[t] * v[len - 1 - t];
  return s;
}

void check_square(const CMatrix& a, std::size_t b) {
  if (!a.is_square() || a.rows() != b) {
    throw Error(ErrorKind::invalid_arguments, "transform dimension must equal b = " + std::to_string(b));
  }
}

}  // namespace

double g_analytic_L1(const CMatrix& a, std::size_t b, double c_mag) {
  check_square(a, b);
  const double c4 = std::pow(c_mag, 4);
  double total = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const auto u = lag_correlation(a, i, i);
    total += lag_contract(u, u).real();
  }
  return c4 * total;
}

CMatrix grad_analytic_L1(const CMatrix& a, double c_mag) {
  const std::size_t n = a.rows();
  check_square(a, n);
  const double c4 = std::pow(c_mag, 4);
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = lag_correlation(a, i, i);
    auto ai = a.row(i);
    for (std::size_t col = 0; col < n; ++col) {
      // sum over lags t with 0 <= col - t < n
      cplx s{};
      for (std::size_t r = 0; r < n; ++r) {
        // t = col - r, stored at index col - r + n - 1
        s += u[col + n - 1 - r] * ai[r];
      }
      g(i, col) = 2.0 * c4 * s;
    }
  }
  return g;
}

PairMatrix pair_matrix_analytic(const CMatrix& a, std::size_t i, std::size_t k, double c_mag) {
  const double c4 = std::pow(c_mag, 4);
  const auto uii = lag_correlation(a, i, i);
  const auto ukk = lag_correlation(a, k, k);
  const auto uik = lag_correlation(a, i, k);

  const double xi4 = c4 * lag_contract(uii, uii).real();
  const double xk4 = c4 * lag_contract(ukk, ukk).real();
  const double xixk = c4 * lag_contract(uii, ukk).real();  // E|x_i|^2|x_k|^2 = E|z|^2
  const cplx z2 = c4 * lag_contract(uik, uik);              // E z^2
  const cplx dz = 0.5 * c4 * (lag_contract(uii, uik) - lag_contract(ukk, uik));  // E[D z]

  const double m11 = 0.25 * (xi4 - 2.0 * xixk + xk4);
  const double m12 = dz.real();
  const double m13 = -dz.imag();
  const double m22 = 0.5 * (xixk + z2.real());
  const double m33 = 0.5 * (xixk - z2.real());
  const double m23 = -0.5 * z2.imag();
  return {{{m11, m12, m13}, {m12, m22, m23}, {m13, m23, m33}}};
}

double d1_closed_form(std::size_t b, std::size_t i, std::size_t k) {
  if (b < 2) throw Error(ErrorKind::invalid_arguments, "closed form needs b >= 2");
  if (i <= k || i >= b) throw Error(ErrorKind::invalid_arguments, "closed form needs k < i < b");
  const double bd = static_cast<double>(b);
  const double sn = std::sin(std::numbers::pi * static_cast<double>(i - k) / bd);
  const double csc2 = 1.0 / (sn * sn);
  return (8.0 / (bd * bd)) * (3.0 * bd * csc2 - (2.0 * bd * bd * bd + 7.0 * bd) / 3.0);
}

double dct_first_derivative(std::size_t b, std::size_t i, std::size_t k) {
  if (b < 2) throw Error(ErrorKind::invalid_arguments, "DCT derivative needs b >= 2");
  if (i <= k || i >= b) throw Error(ErrorKind::invalid_arguments, "DCT derivative needs k < i < b");
  const CMatrix c = dct2_matrix(b).matrix();
  std::vector<double> ci(b), ck(b);
  for (std::size_t p = 0; p < b; ++p) {
    ci[p] = c(i, p).real();
    ck[p] = c(k, p).real();
  }
  // E[y_p y_q y_r y_n] = (1/8)(d[p+q-r-n] + d[p-q+r-n] + d[p-q-r+n]); the
  // derivative 4 E[x_i^3 x_k - x_i x_k^3] becomes
  // (1/2) sum (ci_p ci_q ci_r ck_n - ck_p ck_q ck_r ci_n) over each delta.
  const auto bl = static_cast<long>(b);
  double total = 0.0;
  for (long p = 0; p < bl; ++p) {
    for (long q = 0; q < bl; ++q) {
      for (long r = 0; r < bl; ++r) {
        const long ns[3] = {p + q - r, p - q + r, q + r - p};
        const double tri = ci[p] * ci[q] * ci[r];
        const double trk = ck[p] * ck[q] * ck[r];
        for (long n : ns) {
          if (n < 0 || n >= bl) continue;
          total += tri * ck[n] - trk * ci[n];
        }
      }
    }
  }
  return 0.5 * total;
}

}  // namespace l4u
