#pragma once

// Dense complex linear algebra for small square problems (N up to a few
// hundred): matrices, one-sided Jacobi SVD, projection onto the unitary group,
// Givens/phase updates, DFT/DCT builders and l4 sparsity metrics.
//
// Indices are 0-based throughout the C++ API.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "l4u/error.hpp"

namespace l4u {

using cplx = std::complex<double>;

class CounterRng;

/// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  /// Zero matrix; rows and cols must both be positive.
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);
  static CMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<cplx> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const cplx> v);

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  bool operator==(const CMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x);

double frobenius_norm(const CMatrix& m);
bool all_finite(const CMatrix& m);
/// Frobenius norm of m^H m - I.
double unitarity_defect(const CMatrix& m);

namespace detail {
struct UnitaryAccess;
}

/// Square matrix with certified unitarity. Construction through `from` checks
/// ||A^H A - I||_F <= tol (default 1e-10). Results of unitary-preserving
/// operations (Givens updates, projections) are built internally and carry
/// their measured defect, which learners keep below `kReprojectDefect`.
class UnitaryMatrix {
 public:
  static constexpr double kDefaultTol = 1e-10;
  static constexpr double kReprojectDefect = 1e-8;

  static UnitaryMatrix from(CMatrix m, double tol = kDefaultTol);
  static UnitaryMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  double unitarity_defect() const noexcept { return defect_; }

  /// Re-projects onto the unitary group (UV^H of the current matrix).
  UnitaryMatrix renormalize() const;

 private:
  UnitaryMatrix(CMatrix m, double defect) : m_(std::move(m)), defect_(defect) {}
  friend struct detail::UnitaryAccess;

  CMatrix m_;
  double defect_ = 0.0;
};

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

/// Real rotation in the (i, k) plane, i > k:
/// G(i,i) = G(k,k) = cos(alpha), G(i,k) = -G(k,i) = sin(alpha).
struct GivensRotation {
  std::size_t i = 1;
  std::size_t k = 0;
  double alpha = 0.0;
};

/// Diagonal phase shift R(k, beta): R(k,k) = exp(j beta), identity elsewhere.
struct PhaseShift {
  std::size_t k = 0;
  double beta = 0.0;
};

CMatrix givens_matrix(std::size_t n, const GivensRotation& g);
CMatrix phase_matrix(std::size_t n, const PhaseShift& p);

/// G(i,k,alpha) R(i,beta_i) R(k,beta_k) a. Only rows i and k change.
UnitaryMatrix apply_update(const UnitaryMatrix& a, const GivensRotation& g, const PhaseShift& bi,
                           const PhaseShift& bk);

/// Unitary DFT: entry (i,k) = exp(-j 2 pi i k / n) / sqrt(n).
UnitaryMatrix dft_matrix(std::size_t n);
/// Orthonormal DCT-II: entry (k,m) = sqrt(2/n) / sqrt(1 + [k==0]) cos(pi (m + 1/2) k / n).
UnitaryMatrix dct2_matrix(std::size_t n);
/// Complex permutation with column k equal to exp(j phases[k]) e_{perm[k]}.
UnitaryMatrix cp_matrix(std::span<const std::size_t> perm, std::span<const double> phases);

/// Haar-distributed unitary (polar factor of a complex Ginibre matrix).
UnitaryMatrix random_unitary(std::size_t n, CounterRng& rng);
/// Uniformly random permutation with uniform phases.
UnitaryMatrix random_cp(std::size_t n, CounterRng& rng);

/// Sum of |entry|^4.
double l4_norm4(const CMatrix& m);

struct SvdResult {
  CMatrix u;                  // rows x rows, unitary
  std::vector<double> sigma;  // min(rows, cols), non-increasing
  CMatrix v;                  // cols x cols, unitary
};

/// One-sided (Hestenes) Jacobi SVD; columns are orthogonalized with complex
/// 2x2 Hermitian rotations until every pair satisfies
/// |a_p^H a_q| <= 1e-14 ||a_p|| ||a_q|| (at most 60 sweeps).
SvdResult svd(const CMatrix& m);

/// Nearest unitary matrix in Frobenius norm, U V^H. Throws
/// degenerate_projection when sigma_min < 1e-12 sigma_max.
UnitaryMatrix project_unitary(const CMatrix& m);

struct CpProjection {
  std::vector<std::size_t> perm;  // argmax row per column (lowest index on ties)
  std::vector<double> phases;     // angle of the selected entry
  double distance_sq = 0.0;       // sum_k ||w_k - exp(j theta_k) e_{m_k}||^2
  bool is_permutation = false;    // no repeated rows in perm
};

CpProjection nearest_cp(const UnitaryMatrix& w);
CpProjection nearest_cp(const CMatrix& w);

}  // namespace l4u
