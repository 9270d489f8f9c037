#pragma once

// Dense square matrices and the small amount of vector arithmetic the
// integrators need. Storage is row-major; sizes in this library stay below
// ~20, so no blocking or expression templates.

#include <cstddef>
#include <span>
#include <vector>

namespace hamext {

using Vector = std::vector<double>;

class Matrix {
 public:
  /// Zero matrix of the given dimension. `dim` must be positive.
  explicit Matrix(std::size_t dim);
  /// Takes `dim*dim` row-major entries; rejects non-finite values.
  Matrix(std::size_t dim, std::vector<double> entries);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const double> diag);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }
  double &operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * dim_ + j];
  }

  [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }
  [[nodiscard]] bool all_finite() const noexcept;

  Matrix &operator+=(const Matrix &other);
  Matrix &operator-=(const Matrix &other);
  Matrix &operator*=(double s) noexcept;

  friend bool operator==(const Matrix &, const Matrix &) = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

[[nodiscard]] Matrix operator+(Matrix a, const Matrix &b);
[[nodiscard]] Matrix operator-(Matrix a, const Matrix &b);
[[nodiscard]] Matrix operator-(Matrix a);
[[nodiscard]] Matrix operator*(double s, Matrix a);
[[nodiscard]] Matrix operator*(Matrix a, double s);
[[nodiscard]] Matrix operator*(const Matrix &a, const Matrix &b);
[[nodiscard]] Vector operator*(const Matrix &a, std::span<const double> x);

[[nodiscard]] Matrix transpose(const Matrix &a);
[[nodiscard]] double frobenius_norm(const Matrix &a) noexcept;
/// Largest absolute entry.
[[nodiscard]] double max_abs(const Matrix &a) noexcept;

// Vector helpers. Sizes are checked and mismatches throw DimensionError.
[[nodiscard]] double dot(std::span<const double> x, std::span<const double> y);
[[nodiscard]] double norm2(std::span<const double> x) noexcept;
[[nodiscard]] double norm_inf(std::span<const double> x) noexcept;
[[nodiscard]] Vector add(std::span<const double> x, std::span<const double> y);
[[nodiscard]] Vector subtract(std::span<const double> x, std::span<const double> y);
[[nodiscard]] Vector scale(double s, std::span<const double> x);
/// y += s*x
void axpy(double s, std::span<const double> x, std::span<double> y);
/// x^T M y
[[nodiscard]] double bilinear(std::span<const double> x, const Matrix &m,
                              std::span<const double> y);

/// The canonical structure matrix J_n = [[0, I_n], [-I_n, 0]].
class StructureMatrix {
 public:
  explicit StructureMatrix(std::size_t n);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return 2 * n_; }
  [[nodiscard]] const Matrix &matrix() const noexcept { return j_; }

 private:
  std::size_t n_;
  Matrix j_;
};

/// LU factorisation with partial pivoting. Throws SingularMatrix when a
/// pivot vanishes relative to the matrix scale.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a);

  [[nodiscard]] Vector solve(std::span<const double> b) const;
  [[nodiscard]] Matrix solve(const Matrix &b) const;
  [[nodiscard]] Matrix inverse() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace hamext
