#include "hamext/matkernels.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

constexpr double kExpScaledNorm = 0.5;
constexpr int kExpMaxTerms = 40;
constexpr double kLogSeriesRadius = 0.9;
constexpr int kLogMaxTerms = 2000;
constexpr int kLogMaxSqrtSteps = 30;
constexpr int kSqrtMaxIterations = 100;

void check_tol(double tol, const char *what) {
  if (!(tol > 0.0) || tol > 1e-6)
    throw InvalidArgument(std::string(what) + ": tolerance must lie in (0, 1e-6]");
}

void check_finite(const Matrix &m, const char *what) {
  if (!m.all_finite()) throw InvalidMatrix(std::string(what) + ": non-finite input");
}

void check_structure(const Matrix &x, const StructureMatrix &j, const char *what) {
  if (x.dim() != j.dim())
    throw DimensionError(std::string(what) + ": matrix has dimension " +
                         std::to_string(x.dim()) + ", structure matrix " +
                         std::to_string(j.dim()));
}

// Series stop: a term is negligible once it is 1e-3*tol relative to the sum.
double term_cutoff(double tol) { return 1e-3 * tol; }

Matrix sqrt_denman_beavers(const Matrix &b) {
  const std::size_t d = b.dim();
  Matrix y = b;
  Matrix z = Matrix::identity(d);
  for (int it = 0; it < kSqrtMaxIterations; ++it) {
    Matrix y_inv(d), z_inv(d);
    try {
      y_inv = LuDecomposition(y).inverse();
      z_inv = LuDecomposition(z).inverse();
    } catch (const SingularMatrix &) {
      throw LogDomainError("mat_log_near_identity: square-root iteration hit a singular iterate");
    }
    Matrix y_next = 0.5 * (y + z_inv);
    Matrix z_next = 0.5 * (z + y_inv);
    const double change = frobenius_norm(y_next - y);
    y = std::move(y_next);
    z = std::move(z_next);
    if (!y.all_finite()) break;
    if (change <= 4.0 * std::numeric_limits<double>::epsilon() * frobenius_norm(y))
      return y;
  }
  throw LogDomainError("mat_log_near_identity: square-root iteration did not converge");
}

Matrix mercator(const Matrix &e, double tol) {
  Matrix sum(e.dim());
  Matrix power = e;
  const double cutoff = term_cutoff(tol);
  for (int k = 1; k <= kLogMaxTerms; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    Matrix term = (sign / k) * power;
    sum += term;
    if (frobenius_norm(term) <= cutoff * std::max(1.0, frobenius_norm(sum)))
      return sum;
    power = power * e;
  }
  throw LogDomainError("mat_log_near_identity: series did not converge");
}

}  // namespace

Matrix mat_exp(const Matrix &x, double tol) {
  check_tol(tol, "mat_exp");
  check_finite(x, "mat_exp");
  const std::size_t d = x.dim();
  const double norm = frobenius_norm(x);
  int squarings = 0;
  if (norm > kExpScaledNorm)
    squarings = static_cast<int>(std::ceil(std::log2(norm / kExpScaledNorm)));
  const Matrix scaled = std::ldexp(1.0, -squarings) * x;

  Matrix sum = Matrix::identity(d);
  Matrix term = Matrix::identity(d);
  const double cutoff = term_cutoff(tol);
  for (int k = 1; k <= kExpMaxTerms; ++k) {
    term = (1.0 / k) * (term * scaled);
    sum += term;
    if (frobenius_norm(term) <= cutoff * frobenius_norm(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  if (!sum.all_finite()) throw InvalidMatrix("mat_exp: result overflowed");
  return sum;
}

Matrix mat_log_near_identity(const Matrix &b, double tol) {
  check_tol(tol, "mat_log_near_identity");
  check_finite(b, "mat_log_near_identity");
  const Matrix id = Matrix::identity(b.dim());
  Matrix root = b;
  int halvings = 0;
  while (frobenius_norm(root - id) > kLogSeriesRadius) {
    if (halvings == kLogMaxSqrtSteps)
      throw LogDomainError("mat_log_near_identity: ||B - I|| could not be reduced below 0.9");
    root = sqrt_denman_beavers(root);
    ++halvings;
  }
  return std::ldexp(1.0, halvings) * mercator(root - id, tol);
}

LogSeries log1p_series_with_derivative(const Matrix &e, const Matrix &de,
                                       double tol) {
  check_tol(tol, "log1p_series_with_derivative");
  check_finite(e, "log1p_series_with_derivative");
  check_finite(de, "log1p_series_with_derivative");
  if (e.dim() != de.dim())
    throw DimensionError("log1p_series_with_derivative: dimension mismatch");
  const double radius = frobenius_norm(e);
  if (radius > kLogSeriesRadius)
    throw LogDomainError("log1p_series_with_derivative: ||E||_F = " +
                         std::to_string(radius) + " exceeds 0.9; reduce the step size");

  // power = E^k, dpower = d(E^k) = d(E^{k-1}) E + E^{k-1} dE.
  Matrix value(e.dim());
  Matrix derivative(e.dim());
  Matrix power = e;
  Matrix dpower = de;
  const double cutoff = term_cutoff(tol);
  for (int k = 1; k <= kLogMaxTerms; ++k) {
    const double coeff = ((k % 2 == 1) ? 1.0 : -1.0) / k;
    value += coeff * power;
    derivative += coeff * dpower;
    if (frobenius_norm(power) / k <= cutoff * std::max(1.0, frobenius_norm(value)))
      return {std::move(value), std::move(derivative), k};
    dpower = dpower * e + power * de;
    power = power * e;
  }
  throw LogDomainError("log1p_series_with_derivative: series did not converge");
}

Matrix commutator(const Matrix &x, const Matrix &y) {
  if (x.dim() != y.dim()) throw DimensionError("commutator: dimension mismatch");
  return x * y - y * x;
}

Matrix dexp(const Matrix &x, const Matrix &y, double tol) {
  if (x.dim() != y.dim()) throw DimensionError("dexp: dimension mismatch");
  check_finite(x, "dexp");
  check_finite(y, "dexp");
  if (!(tol > 0.0)) throw InvalidArgument("dexp: tolerance must be positive");
  if (frobenius_norm(x) > kDexpNormGuard)
    throw SeriesDivergence("dexp: ||X||_F exceeds the convergence guard of 5");

  Matrix sum = y;
  Matrix term = y;
  if (frobenius_norm(term) < tol) return sum;
  for (int k = 1; k < kDexpMaxTerms; ++k) {
    term = (1.0 / (k + 1)) * commutator(x, term);
    sum += term;
    if (frobenius_norm(term) < tol) return sum;
  }
  throw SeriesDivergence("dexp: series not converged after 25 terms");
}

Matrix dexp_inverse(const Matrix &x, const Matrix &v, double tol) {
  if (x.dim() != v.dim()) throw DimensionError("dexp_inverse: dimension mismatch");
  check_finite(x, "dexp_inverse");
  check_finite(v, "dexp_inverse");
  if (frobenius_norm(x) >= 3.0)
    throw SeriesDivergence("dexp_inverse: ||X||_F must stay below 3");
  // B_k / k! for k = 0..40; odd entries beyond k = 1 vanish.
  static const std::array<double, 41> coeff = [] {
    std::array<double, 41> c{};
    // Bernoulli numbers via the recurrence sum_{j<m} C(m+1, j) B_j = -(m+1) B_m.
    std::array<double, 41> bern{};
    bern[0] = 1.0;
    for (int m = 1; m <= 40; ++m) {
      double s = 0.0;
      double binom = 1.0;  // C(m+1, 0)
      for (int j = 0; j < m; ++j) {
        s += binom * bern[j];
        binom = binom * (m + 1 - j) / (j + 1);
      }
      bern[m] = -s / (m + 1);
    }
    double fact = 1.0;
    for (int k = 0; k <= 40; ++k) {
      if (k > 0) fact *= k;
      c[k] = (k > 1 && k % 2 == 1) ? 0.0 : bern[k] / fact;
    }
    return c;
  }();

  Matrix sum = v;
  Matrix ad = v;
  for (int k = 1; k <= 40; ++k) {
    ad = commutator(x, ad);
    if (coeff[k] == 0.0) continue;
    const Matrix term = coeff[k] * ad;
    sum += term;
    if (frobenius_norm(term) < tol) return sum;
  }
  throw SeriesDivergence("dexp_inverse: series not converged after 40 terms");
}

Matrix project_sp(const Matrix &x, const StructureMatrix &j) {
  check_structure(x, j, "project_sp");
  const Matrix &jm = j.matrix();
  return 0.5 * (x + jm * transpose(x) * jm);
}

double symplectic_residual(const Matrix &m, const StructureMatrix &j) {
  check_structure(m, j, "symplectic_residual");
  const Matrix &jm = j.matrix();
  return frobenius_norm(transpose(m) * jm * m - jm);
}

double algebra_residual(const Matrix &x, const StructureMatrix &j) {
  check_structure(x, j, "algebra_residual");
  const Matrix &jm = j.matrix();
  return frobenius_norm(jm * x + transpose(x) * jm);
}

}  // namespace hamext
