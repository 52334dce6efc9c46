#include <algorithm>
#include <cmath>
#include <string>

#include "l4u/matkit.hpp"

namespace l4u {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_arguments: return "invalid-arguments";
    case ErrorKind::degenerate_projection: return "degenerate-projection";
    case ErrorKind::format_error: return "format-error";
    case ErrorKind::invalid_fraction: return "invalid-fraction";
    case ErrorKind::infeasible_scene: return "infeasible-scene";
    case ErrorKind::detection_error: return "detection-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::invalid_dimension, "matrix dimensions must be positive");
  }
  data_.assign(rows * cols, cplx{});
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::invalid_dimension, "matrix dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::invalid_dimension,
                "expected " + std::to_string(rows * cols) + " entries, got " +
                    std::to_string(data_.size()));
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<cplx> CMatrix::column(std::size_t j) const {
  std::vector<cplx> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void CMatrix::set_column(std::size_t j, std::span<const cplx> v) {
  if (v.size() != rows_) throw Error(ErrorKind::invalid_dimension, "column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r = *this;
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::invalid_dimension, "matrix sum shape mismatch");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::invalid_dimension, "matrix difference shape mismatch");
  for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::invalid_dimension, "matrix product shape mismatch");
  CMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = r.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx s = a(i, l);
      if (s == cplx{}) continue;
      auto brow = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += s * brow[j];
    }
  }
  return r;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::invalid_dimension, "matrix-vector shape mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc{};
    auto r = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

bool all_finite(const CMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double unitarity_defect(const CMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::invalid_dimension, "unitarity requires a square matrix");
  const std::size_t n = m.rows();
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      cplx g{};
      for (std::size_t i = 0; i < n; ++i) g += std::conj(m(i, p)) * m(i, q);
      if (p == q) g -= 1.0;
      s += std::norm(g);
    }
  }
  return std::sqrt(s);
}

double l4_norm4(const CMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) {
    const double a = std::norm(z);
    s += a * a;
  }
  return s;
}

}  // namespace l4u
