#include "hamext/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

void require_same_dim(const Matrix &a, const Matrix &b, const char *what) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
}

void require_same_size(std::size_t a, std::size_t b, const char *what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": length mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw DimensionError("Matrix: dimension must be positive");
}

Matrix::Matrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw DimensionError("Matrix: dimension must be positive");
  if (data_.size() != dim * dim)
    throw DimensionError("Matrix: expected " + std::to_string(dim * dim) +
                         " entries, got " + std::to_string(data_.size()));
  if (!all_finite()) throw InvalidMatrix("Matrix: non-finite entry");
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  if (!m.all_finite()) throw InvalidMatrix("Matrix::diagonal: non-finite entry");
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix &Matrix::operator+=(const Matrix &other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix &Matrix::operator*=(double s) noexcept {
  for (double &v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
  require_same_dim(a, b, "operator*");
  const std::size_t d = a.dim();
  Matrix c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix &a, std::span<const double> x) {
  require_same_size(a.dim(), x.size(), "matrix-vector product");
  const std::size_t d = a.dim();
  Vector y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix transpose(const Matrix &a) {
  Matrix t(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
  return t;
}

double frobenius_norm(const Matrix &a) noexcept {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix &a) noexcept {
  double m = 0.0;
  for (double v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> x) noexcept {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Vector add(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "add");
  Vector r(x.begin(), x.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "subtract");
  Vector r(x.begin(), x.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

Vector scale(double s, std::span<const double> x) {
  Vector r(x.begin(), x.end());
  for (double &v : r) v *= s;
  return r;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double bilinear(std::span<const double> x, const Matrix &m,
                std::span<const double> y) {
  return dot(x, m * y);
}

StructureMatrix::StructureMatrix(std::size_t n) : n_(n), j_(2 * n) {
  for (std::size_t i = 0; i < n; ++i) {
    j_(i, n + i) = 1.0;
    j_(n + i, i) = -1.0;
  }
}

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(lu_.dim()) {
  const std::size_t d = lu_.dim();
  for (std::size_t i = 0; i < d; ++i) perm_[i] = i;
  const double scale = std::max(max_abs(lu_), 1e-300);
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < d; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
    if (std::abs(lu_(piv, k)) <= 1e-14 * scale)
      throw SingularMatrix("LuDecomposition: matrix is numerically singular");
    if (piv != k) {
      for (std::size_t j = 0; j < d; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      const double f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      for (std::size_t j = k + 1; j < d; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t d = lu_.dim();
  require_same_size(d, b.size(), "LuDecomposition::solve");
  Vector x(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = d; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < d; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::solve(const Matrix &b) const {
  require_same_dim(lu_, b, "LuDecomposition::solve");
  const std::size_t d = lu_.dim();
  Matrix x(d);
  Vector col(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) col[i] = b(i, j);
    const Vector sol = solve(col);
    for (std::size_t i = 0; i < d; ++i) x(i, j) = sol[i];
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  return solve(Matrix::identity(lu_.dim()));
}

}  // namespace hamext
