#include "hamext/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

std::size_t checked_step_count(double span, double h, const char *what) {
  const double ratio = span / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument(std::string(what) + ": interval is not an integer multiple of h");
  return static_cast<std::size_t>(rounded);
}

PhasePoint integrate(const Method &method, const LinearHamiltonianProblem &prob,
                     ExtendedPoint z, std::size_t steps, double h) {
  const StepOptions opts{.update_u = false};
  for (std::size_t k = 0; k < steps; ++k) z = method.step(prob, z, h, opts).z_next;
  return z.y;
}

}  // namespace

Matrix qptu_to_qtpu(std::size_t n) {
  // Row r of the permutation selects the source coordinate of target r.
  Matrix perm(2 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    perm(i, i) = 1.0;                   // q
    perm(n + 1 + i, n + i) = 1.0;       // p
  }
  perm(n, 2 * n) = 1.0;                 // t
  perm(2 * n + 1, 2 * n + 1) = 1.0;     // u
  return perm;
}

Matrix extended_structure_qtpu(std::size_t n) {
  // Positions (q, t) and momenta (p, u) pair up as dp^i ^ dq^i + du ^ dt.
  const std::size_t m = n + 1;
  Matrix j(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, m + i) = 1.0;
    j(m + i, i) = -1.0;
  }
  return j;
}

Matrix step_jacobian(const Method &method, const LinearHamiltonianProblem &prob,
                     const ExtendedPoint &z, double h, double fd_step) {
  const Vector z0 = z.flatten();
  const std::size_t d = z0.size();
  Matrix jac(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double delta = fd_step * std::max(1.0, std::abs(z0[c]));
    Vector zp = z0, zm = z0;
    zp[c] += delta;
    zm[c] -= delta;
    const Vector fp = method.step(prob, ExtendedPoint::unflatten(zp), h).z_next.flatten();
    const Vector fm = method.step(prob, ExtendedPoint::unflatten(zm), h).z_next.flatten();
    for (std::size_t r = 0; r < d; ++r) jac(r, c) = (fp[r] - fm[r]) / (2.0 * delta);
  }
  return jac;
}

CanonicityReport check_canonicity(const Method &method, const LinearHamiltonianProblem &prob,
                                  const ExtendedPoint &z, double h, double fd_step) {
  if (!(fd_step >= 1e-7 && fd_step <= 1e-4))
    throw InvalidArgument("check_canonicity: fd_step must lie in [1e-7, 1e-4]");
  const std::size_t n = prob.n();
  const std::size_t d = 2 * n;
  const Matrix jac = step_jacobian(method, prob, z, h, fd_step);

  // Y_y is the (q, p) block, identical in both orderings.
  Matrix yy(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) yy(r, c) = jac(r, c);
  const StructureMatrix j(n);
  CanonicityReport report{symplectic_residual(yy, j), std::nullopt, std::nullopt};
  if (!method.descriptor().updates_u) return report;

  // W_y + Y_t^T J Y_y with W_y = dU/d(q, p) and Y_t = d(Q, P)/dt.
  Vector yt(d);
  for (std::size_t r = 0; r < d; ++r) yt[r] = jac(r, d);
  const Vector yt_j_yy = transpose(yy) * (transpose(j.matrix()) * yt);
  double w_res = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = jac(d + 1, c) + yt_j_yy[c];
    w_res += diff * diff;
  }
  report.w_condition_residual = std::sqrt(w_res);

  const Matrix perm = qptu_to_qtpu(n);
  const Matrix zz = perm * jac * transpose(perm);
  const Matrix jt = extended_structure_qtpu(n);
  report.extended_residual = frobenius_norm(transpose(zz) * jt * zz - jt);
  return report;
}

double check_exponential_exactness(const Method &method, const Matrix &a, const PhasePoint &y,
                                   double t, double h) {
  const LinearHamiltonianProblem prob = LinearHamiltonianProblem::autonomous(a);
  const ExtendedPoint z{y, t, 0.0};
  const Vector stepped = method.step(prob, z, h).z_next.y.stacked();
  const Vector exact = mat_exp(h * a) * y.stacked();
  return norm2(subtract(stepped, exact)) / norm2(y.stacked());
}

double check_symmetry(const Method &method, const LinearHamiltonianProblem &prob,
                      const ExtendedPoint &z, double h) {
  const ExtendedPoint forward = method.step(prob, z, h).z_next;
  const ExtendedPoint back = method.step(prob, forward, -h).z_next;
  return norm_inf(subtract(back.flatten(), z.flatten()));
}

OrderEstimate estimate_order(const Method &method, const LinearHamiltonianProblem &prob,
                             const ExtendedPoint &z0, double t_end, double h0) {
  if (!(h0 > 0.0)) throw InvalidArgument("estimate_order: h0 must be positive");
  const std::size_t steps = checked_step_count(t_end - z0.t, h0, "estimate_order");
  const Method reference = make_method(MethodId::LieGauss);
  const PhasePoint y_ref = integrate(reference, prob, z0, steps * 64, h0 / 64.0);

  OrderEstimate est{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t factor = std::size_t{1} << k;
    est.step_sizes[k] = h0 / static_cast<double>(factor);
    const PhasePoint y = integrate(method, prob, z0, steps * factor, est.step_sizes[k]);
    est.errors[k] = norm2(subtract(y.stacked(), y_ref.stacked()));
  }
  if (!(est.errors[0] > est.errors[1] && est.errors[1] > est.errors[2]))
    throw NonConvergence("estimate_order: errors do not decrease for " + method.id());
  est.measured_order = 0.5 * (std::log2(est.errors[0] / est.errors[1]) +
                              std::log2(est.errors[1] / est.errors[2]));
  return est;
}

std::vector<double> k_deviation_series(const Method &method, const LinearHamiltonianProblem &prob,
                                       const ExtendedPoint &z0, std::size_t steps, double h) {
  if (!method.descriptor().updates_u)
    throw NotApplicable("K conservation: " + method.id() + " does not update u");
  std::vector<double> dev;
  dev.reserve(steps + 1);
  const double k0 = extended_hamiltonian(prob, z0);
  ExtendedPoint z = z0;
  dev.push_back(0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    z = method.step(prob, z, h).z_next;
    dev.push_back(std::abs(extended_hamiltonian(prob, z) - k0));
  }
  return dev;
}

double check_K_conservation(const Method &method, const LinearHamiltonianProblem &prob,
                            const ExtendedPoint &z0, std::size_t steps, double h) {
  const std::vector<double> dev = k_deviation_series(method, prob, z0, steps, h);
  return *std::max_element(dev.begin(), dev.end());
}

double DriftSummary::ratio() const {
  if (first_half_max == 0.0)
    return second_half_max == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return second_half_max / first_half_max;
}

DriftSummary drift_summary(std::span<const double> values) {
  if (values.size() < 2) throw EmptyInput("drift_summary: need at least two samples");
  const std::size_t half = values.size() / 2;
  DriftSummary s{0.0, 0.0};
  for (std::size_t i = 0; i < half; ++i) s.first_half_max = std::max(s.first_half_max, std::abs(values[i]));
  for (std::size_t i = half; i < values.size(); ++i)
    s.second_half_max = std::max(s.second_half_max, std::abs(values[i]));
  return s;
}

}  // namespace hamext
