#pragma once

// Matrix functions used by the exponential integrators: exponential,
// logarithm near the identity, commutator, dexp, projection onto sp(2n),
// and the symplecticity residual.
//
// Norm guards use the Frobenius norm as a cheap upper bound of the spectral
// norm.

#include "hamext/matrix.hpp"

namespace hamext {

inline constexpr double kDefaultTol = 1e-13;

/// exp(X) by scaling and squaring around a Taylor core (scaled norm <= 0.5).
/// Requires tol in (0, 1e-6]. exp(0) is exactly I.
[[nodiscard]] Matrix mat_exp(const Matrix &x, double tol = kDefaultTol);

/// log(B) for B near the identity. Uses the Mercator series when
/// ||B - I||_F <= 0.9 and otherwise takes Denman-Beavers square roots until
/// it is. Throws LogDomainError if B cannot be brought into range.
[[nodiscard]] Matrix mat_log_near_identity(const Matrix &b,
                                           double tol = kDefaultTol);

/// log(I + E) together with its derivative along dE, summed term by term
/// with a shared truncation index. Requires ||E||_F <= 0.9.
struct LogSeries {
  Matrix value;
  Matrix derivative;
  int terms;
};
[[nodiscard]] LogSeries log1p_series_with_derivative(const Matrix &e,
                                                     const Matrix &de,
                                                     double tol = kDefaultTol);

/// XY - YX
[[nodiscard]] Matrix commutator(const Matrix &x, const Matrix &y);

inline constexpr int kDexpMaxTerms = 25;
inline constexpr double kDexpNormGuard = 5.0;

/// dexp_X(Y) = sum_k ad_X^k(Y) / (k+1)!, truncated once a term drops below
/// tol (Frobenius). Throws SeriesDivergence when ||X||_F > 5 or the series
/// has not converged within 25 terms.
[[nodiscard]] Matrix dexp(const Matrix &x, const Matrix &y,
                          double tol = kDefaultTol);

/// Inverse of Y -> dexp_X(Y): sum_k B_k/k! ad_X^k(V) with Bernoulli numbers
/// (B_1 = -1/2). Needs ||X||_F < 3; throws SeriesDivergence otherwise.
[[nodiscard]] Matrix dexp_inverse(const Matrix &x, const Matrix &v,
                                  double tol = kDefaultTol);

/// Pi(X) = (X + J X^T J) / 2, the linear projection gl(2n) -> sp(2n).
[[nodiscard]] Matrix project_sp(const Matrix &x, const StructureMatrix &j);

/// ||M^T J M - J||_F
[[nodiscard]] double symplectic_residual(const Matrix &m, const StructureMatrix &j);

/// ||J X + X^T J||_F, zero exactly when X lies in sp(2n).
[[nodiscard]] double algebra_residual(const Matrix &x, const StructureMatrix &j);

}  // namespace hamext
