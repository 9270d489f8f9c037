#pragma once

// Numerical checks of the structural properties a method claims: canonicity
// of the extended step map, exactness on autonomous problems, symmetry,
// convergence order and conservation of K = H + u.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "hamext/integrators.hpp"

namespace hamext {

struct CanonicityReport {
  /// ||Y_y^T J Y_y - J||_F
  double symplectic_residual_yy;
  /// ||W_y + Y_t^T J Y_y||, absent when the method leaves u untouched.
  std::optional<double> w_condition_residual;
  /// Full (2n+2) symplectic residual in the (q, t, p, u) ordering.
  std::optional<double> extended_residual;
};

/// Permutation taking (q, p, t, u) coordinates to (q, t, p, u).
[[nodiscard]] Matrix qptu_to_qtpu(std::size_t n);

/// Structure matrix of dp^i ^ dq^i + du ^ dt in (q, t, p, u) coordinates.
[[nodiscard]] Matrix extended_structure_qtpu(std::size_t n);

/// Jacobian of the step map in (q, p, t, u) coordinates by central
/// differences. Step per component is fd_step * max(1, |z_i|).
[[nodiscard]] Matrix step_jacobian(const Method &method, const LinearHamiltonianProblem &prob,
                                   const ExtendedPoint &z, double h, double fd_step);

/// fd_step must lie in [1e-7, 1e-4].
[[nodiscard]] CanonicityReport check_canonicity(const Method &method,
                                                const LinearHamiltonianProblem &prob,
                                                const ExtendedPoint &z, double h,
                                                double fd_step = 1e-5);

/// ||step(y) - exp(hA) y||_2 / ||y||_2 on the autonomous problem y' = A y.
[[nodiscard]] double check_exponential_exactness(const Method &method, const Matrix &a,
                                                 const PhasePoint &y, double t, double h);

/// ||step_{-h}(step_h(z)) - z||_inf over (q, p, t, u).
[[nodiscard]] double check_symmetry(const Method &method, const LinearHamiltonianProblem &prob,
                                    const ExtendedPoint &z, double h);

struct OrderEstimate {
  double measured_order;
  std::array<double, 3> step_sizes;
  std::array<double, 3> errors;
};

/// Final-state errors at h0, h0/2, h0/4 against lie_gauss at h0/64; the order
/// is the mean of the two log2 error ratios. Throws NonConvergence when the
/// errors do not decrease.
[[nodiscard]] OrderEstimate estimate_order(const Method &method,
                                           const LinearHamiltonianProblem &prob,
                                           const ExtendedPoint &z0, double t_end, double h0);

/// |K_k - K_0| for k = 0..steps.
[[nodiscard]] std::vector<double> k_deviation_series(const Method &method,
                                                     const LinearHamiltonianProblem &prob,
                                                     const ExtendedPoint &z0, std::size_t steps,
                                                     double h);

/// max_k |K_k - K_0|. Throws NotApplicable for methods that do not update u.
[[nodiscard]] double check_K_conservation(const Method &method,
                                          const LinearHamiltonianProblem &prob,
                                          const ExtendedPoint &z0, std::size_t steps, double h);

/// Maxima over the two halves of a series; ratio = second / first.
struct DriftSummary {
  double first_half_max;
  double second_half_max;
  [[nodiscard]] double ratio() const;
};
[[nodiscard]] DriftSummary drift_summary(std::span<const double> values);

}  // namespace hamext
