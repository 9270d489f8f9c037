#pragma once

// One-step maps on the extended phase space (q, p, t, u) for y' = A(t) y.
//
// Every method advances time by exactly h. Canonical methods also carry the
// conjugate variable u through an update U = u + W(q, p, t) that makes the
// extended map symplectic; the rest either integrate u with the same
// Runge-Kutta weights or leave it untouched (see MethodDescriptor::updates_u).

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamext/matkernels.hpp"
#include "hamext/model.hpp"

namespace hamext {

enum class MethodId {
  LieEuler,
  LieMidpoint,
  LieGauss,
  GaussLegendre4,
  Midpoint,
  Kahan,
  Projection,
  Lobatto3C,
  Radau2A,
  SymplecticEuler,
  ExpNonCan,
  ExpSymNonCan,
  LieMidpointTripleJump,
  MidpointTripleJump,
  KahanTripleJump,
};

struct MethodDescriptor {
  std::string id;
  int order;
  bool canonical;
  bool symmetric;
  bool exponential;
  /// False when u is copied unchanged.
  bool updates_u;

  /// "CSE"-style property string.
  [[nodiscard]] std::string properties() const;
};

struct StepDiagnostics {
  int stages = 0;
  int solver_iterations = 0;
  /// ||M^T J M - J||_F of the (q, p) step matrix, for exponential maps.
  std::optional<double> symplectic_residual;
};

struct StepResult {
  ExtendedPoint z_next;
  std::optional<StepDiagnostics> diagnostics;
};

struct StepOptions {
  /// Skipping the u-update saves the dexp evaluation when only (q, p) matter.
  bool update_u = true;
  bool diagnostics = false;
  double tol = kDefaultTol;
};

using StepFunction = std::function<StepResult(const LinearHamiltonianProblem &,
                                              const ExtendedPoint &, double,
                                              const StepOptions &)>;

class Method {
 public:
  Method(MethodDescriptor descriptor, StepFunction step);

  [[nodiscard]] const MethodDescriptor &descriptor() const noexcept { return descriptor_; }
  [[nodiscard]] const std::string &id() const noexcept { return descriptor_.id; }

  StepResult step(const LinearHamiltonianProblem &prob, const ExtendedPoint &z, double h,
                  const StepOptions &opts = {}) const;

 private:
  MethodDescriptor descriptor_;
  StepFunction step_;
};

struct ButcherTableau {
  ButcherTableau(Matrix a, Vector b, Vector c);

  [[nodiscard]] std::size_t stages() const noexcept { return b.size(); }

  Matrix a;
  Vector b;
  Vector c;
};

namespace tableaux {
ButcherTableau gauss_legendre4();
ButcherTableau implicit_midpoint();
ButcherTableau lobatto3c();
ButcherTableau radau2a();
}  // namespace tableaux

/// Companion tableau of a symplectic partitioned pair:
/// a_hat_ij = b_j - a_ji b_j / b_i, b_hat = b. Requires every b_i != 0.
[[nodiscard]] ButcherTableau sprk_companion(const ButcherTableau &t);

// Individual steppers. h may be negative (adjoint checks) but not zero.
StepResult step_lie_euler(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                          double h, const StepOptions &opts = {});
StepResult step_lie_midpoint(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                             double h, const StepOptions &opts = {});
StepResult step_lie_gauss(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                          double h, const StepOptions &opts = {});
StepResult step_projection(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                           double h, const StepOptions &opts = {});
StepResult step_exp_noncan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                           double h, const StepOptions &opts = {});
StepResult step_exp_sym_noncan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                               double h, const StepOptions &opts = {});
StepResult step_rk_extended(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                            double h, const ButcherTableau &tableau,
                            const StepOptions &opts = {});
StepResult step_kahan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z, double h,
                      const StepOptions &opts = {});
StepResult step_symplectic_euler(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                                 double h, const StepOptions &opts = {});

/// Substep fractions (g1, g2, g1) of the order-(p+2) triple jump.
struct TripleJumpWeights {
  double outer;
  double inner;
};
[[nodiscard]] TripleJumpWeights triple_jump_weights(int base_order);

/// Symmetric composition base(g1 h) o base(g2 h) o base(g1 h). The result
/// claims order p + 2 only when the base is symmetric.
[[nodiscard]] Method triple_jump(const Method &base, int base_order);

/// u + 1/2 y^T M^T J M' y. Throws NotSymplectic unless M^T J M = J to 1e-10.
[[nodiscard]] double canonical_u_update(const Matrix &m, const Matrix &m_prime,
                                        const PhasePoint &y, double u, double h);

/// The generator X(t) of an exponential step map exp(h X(t)), where one exists.
[[nodiscard]] Matrix exponential_generator(MethodId id, const LinearHamiltonianProblem &prob,
                                          double t, double h);

[[nodiscard]] Method make_method(MethodId id);
[[nodiscard]] MethodId method_id_from_string(std::string_view id);
[[nodiscard]] std::string_view to_string(MethodId id);
[[nodiscard]] Method make_method(std::string_view id);
/// Every method in ranking order, then the extras.
[[nodiscard]] const std::vector<MethodId> &all_method_ids();
/// The fourteen methods of the long-time energy experiment, in ranking order.
[[nodiscard]] const std::vector<MethodId> &table_method_ids();

}  // namespace hamext
