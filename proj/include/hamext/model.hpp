#pragma once

// Time-dependent quadratic Hamiltonians H(y, t) = -1/2 y^T J A(t) y on R^{2n}
// and their extension to (q, p, t, u) with K = H + u.

#include <cstddef>
#include <functional>
#include <span>

#include "hamext/matrix.hpp"

namespace hamext {

/// y = (q, p) stacked as one vector of length 2n.
class PhasePoint {
 public:
  PhasePoint(std::span<const double> q, std::span<const double> p);
  /// Takes the stacked (q, p) vector; its length must be even and positive.
  explicit PhasePoint(Vector stacked);

  [[nodiscard]] std::size_t n() const noexcept { return data_.size() / 2; }
  [[nodiscard]] std::span<const double> q() const noexcept { return {data_.data(), n()}; }
  [[nodiscard]] std::span<const double> p() const noexcept {
    return {data_.data() + n(), n()};
  }
  [[nodiscard]] const Vector &stacked() const noexcept { return data_; }

  friend bool operator==(const PhasePoint &, const PhasePoint &) = default;

 private:
  Vector data_;
};

/// z = (q, p, t, u).
struct ExtendedPoint {
  PhasePoint y;
  double t;
  double u;

  /// (q, p, t, u) flattened.
  [[nodiscard]] Vector flatten() const;
  static ExtendedPoint unflatten(std::span<const double> z);

  friend bool operator==(const ExtendedPoint &, const ExtendedPoint &) = default;
};

using MatrixFunction = std::function<Matrix(double)>;

/// y' = A(t) y with A(t) in sp(2n). Both A and A' are supplied analytically.
class LinearHamiltonianProblem {
 public:
  LinearHamiltonianProblem(std::size_t n, MatrixFunction coefficient,
                           MatrixFunction coefficient_derivative);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return 2 * n_; }
  [[nodiscard]] const StructureMatrix &structure() const noexcept { return j_; }

  [[nodiscard]] Matrix coefficient(double t) const;
  [[nodiscard]] Matrix coefficient_derivative(double t) const;

  /// Constant coefficient, A' = 0.
  static LinearHamiltonianProblem autonomous(const Matrix &a);

 private:
  std::size_t n_;
  StructureMatrix j_;
  MatrixFunction a_;
  MatrixFunction da_;
};

/// H = 1/2 ((1 + eps sin(alpha t)) q^T q + p^T p).
struct PerturbedOscillator {
  std::size_t n;
  double epsilon;
  double alpha;

  [[nodiscard]] LinearHamiltonianProblem problem() const;
};

[[nodiscard]] double hamiltonian(const LinearHamiltonianProblem &prob,
                                 const PhasePoint &y, double t);
/// dH/dt = -1/2 y^T J A'(t) y
[[nodiscard]] double hamiltonian_time_derivative(const LinearHamiltonianProblem &prob,
                                                 const PhasePoint &y, double t);
/// (q', p', t', u') = (A(t) y, 1, -dH/dt)
[[nodiscard]] Vector extended_vector_field(const LinearHamiltonianProblem &prob,
                                           const ExtendedPoint &z);
/// K = H + u
[[nodiscard]] double extended_hamiltonian(const LinearHamiltonianProblem &prob,
                                          const ExtendedPoint &z);

/// Start point with u0 = -H(q0, p0, t0), so that K = 0.
[[nodiscard]] ExtendedPoint initial_point(const LinearHamiltonianProblem &prob,
                                          const PhasePoint &y0, double t0);

}  // namespace hamext
