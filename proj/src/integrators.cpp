#include "hamext/integrators.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kGaussC1 = 0.5 - kSqrt3 / 6.0;
constexpr double kGaussC2 = 0.5 + kSqrt3 / 6.0;

void check_step(const LinearHamiltonianProblem &prob, const ExtendedPoint &z, double h,
                const char *what) {
  if (h == 0.0 || !std::isfinite(h))
    throw InvalidArgument(std::string(what) + ": step size must be finite and nonzero");
  if (z.y.n() != prob.n())
    throw DimensionError(std::string(what) + ": state has n = " + std::to_string(z.y.n()) +
                         ", problem has n = " + std::to_string(prob.n()));
}

// a^T J b for stacked (q, p) vectors.
double pairing(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[n + i] - a[n + i] * b[i];
  return s;
}

// -dH/dt = 1/2 y^T J A'(t) y, the u-component of the extended vector field.
double energy_rate(const Matrix &da, std::span<const double> y) {
  return 0.5 * pairing(y, da * y);
}

StepResult finish(const ExtendedPoint &z, double h, Vector y_next, double u_next,
                  std::optional<StepDiagnostics> diag) {
  return StepResult{ExtendedPoint{PhasePoint(std::move(y_next)), z.t + h, u_next},
                    std::move(diag)};
}

// Y = exp(hX) y. With a canonical u-update, U = u + h/2 Y^T J dexp_{hX}(X') Y.
template <class Derivative>
StepResult exponential_step(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                            double h, const Matrix &x, Derivative &&derivative,
                            bool canonical_u, const StepOptions &opts) {
  const Matrix hx = h * x;
  const Matrix m = mat_exp(hx, opts.tol);
  Vector y_next = m * z.y.stacked();
  double u_next = z.u;
  if (canonical_u && opts.update_u) {
    const Matrix g = dexp(hx, derivative(), opts.tol);
    u_next = z.u + 0.5 * h * pairing(y_next, g * y_next);
  }
  std::optional<StepDiagnostics> diag;
  if (opts.diagnostics)
    diag = StepDiagnostics{1, 0, symplectic_residual(m, prob.structure())};
  return finish(z, h, std::move(y_next), u_next, std::move(diag));
}

// X(t) = 1/2 (A1 + A2) + sqrt(3) h / 12 [A2, A1], A_i = A(t + c_i h).
Matrix lie_gauss_generator(const LinearHamiltonianProblem &prob, double t, double h) {
  const Matrix a1 = prob.coefficient(t + kGaussC1 * h);
  const Matrix a2 = prob.coefficient(t + kGaussC2 * h);
  return 0.5 * (a1 + a2) + (kSqrt3 * h / 12.0) * commutator(a2, a1);
}

Matrix lie_gauss_generator_derivative(const LinearHamiltonianProblem &prob, double t,
                                      double h) {
  const double t1 = t + kGaussC1 * h;
  const double t2 = t + kGaussC2 * h;
  const Matrix a1 = prob.coefficient(t1);
  const Matrix a2 = prob.coefficient(t2);
  const Matrix da1 = prob.coefficient_derivative(t1);
  const Matrix da2 = prob.coefficient_derivative(t2);
  return 0.5 * (da1 + da2) +
         (kSqrt3 * h / 12.0) * (commutator(da2, a1) + commutator(a2, da1));
}

// Generator (1/h) Pi(log(I + hA(t))) and its t-derivative.
struct ProjectionGenerator {
  Matrix x;
  Matrix dx;
};

ProjectionGenerator projection_generator(const LinearHamiltonianProblem &prob, double t,
                                         double h, double tol) {
  const Matrix e = h * prob.coefficient(t);
  const Matrix de = h * prob.coefficient_derivative(t);
  const StructureMatrix &j = prob.structure();
  if (frobenius_norm(e) <= 0.9) {
    const LogSeries ls = log1p_series_with_derivative(e, de, tol);
    return {(1.0 / h) * project_sp(ls.value, j), (1.0 / h) * project_sp(ls.derivative, j)};
  }
  // Outside the series disc: log via square roots, derivative from
  // d exp(L) = dexp_L(dL) exp(L).
  const Matrix b = Matrix::identity(e.dim()) + e;
  const Matrix l = mat_log_near_identity(b, tol);
  Matrix b_inv(e.dim());
  try {
    b_inv = LuDecomposition(b).inverse();
  } catch (const SingularMatrix &) {
    throw LogDomainError("step_projection: I + hA(t) is singular");
  }
  const Matrix dl = dexp_inverse(l, de * b_inv, tol);
  return {(1.0 / h) * project_sp(l, j), (1.0 / h) * project_sp(dl, j)};
}

Matrix noncan_generator(const Matrix &a, const Matrix &a0, const Matrix &a1, double h) {
  return a * (Matrix::identity(a.dim()) + h * (a * commutator(a0, a1)));
}

struct DescriptorRow {
  MethodId id;
  const char *name;
  int order;
  bool canonical, symmetric, exponential, updates_u;
};

constexpr std::array<DescriptorRow, 14> kDescriptors{{
    {MethodId::LieGauss, "lie_gauss", 4, true, true, true, true},
    {MethodId::LieMidpointTripleJump, "lie_midpoint_triple_jump", 4, true, true, true, true},
    {MethodId::LieMidpoint, "lie_midpoint", 2, true, true, true, true},
    {MethodId::LieEuler, "lie_euler", 1, true, false, true, true},
    {MethodId::GaussLegendre4, "gauss_legendre4", 4, true, true, false, true},
    {MethodId::MidpointTripleJump, "midpoint_triple_jump", 4, true, true, false, true},
    {MethodId::Midpoint, "midpoint", 2, true, true, false, true},
    {MethodId::ExpSymNonCan, "exp_sym_noncan", 1, false, true, true, false},
    {MethodId::KahanTripleJump, "kahan_triple_jump", 4, false, true, false, true},
    {MethodId::Projection, "projection", 1, true, false, false, true},
    {MethodId::Kahan, "kahan", 2, false, true, false, true},
    {MethodId::ExpNonCan, "exp_noncan", 1, false, false, true, false},
    {MethodId::SymplecticEuler, "symplectic_euler", 1, true, false, false, false},
    {MethodId::Radau2A, "radau2a", 3, false, false, false, true},
}};

constexpr DescriptorRow kLobattoRow{MethodId::Lobatto3C, "lobatto3c", 2, false, false,
                                    false, true};

const DescriptorRow &row_for(MethodId id) {
  if (id == MethodId::Lobatto3C) return kLobattoRow;
  for (const auto &r : kDescriptors)
    if (r.id == id) return r;
  throw InvalidArgument("unknown method id");
}

MethodDescriptor descriptor_for(MethodId id) {
  const DescriptorRow &r = row_for(id);
  return MethodDescriptor{r.name, r.order, r.canonical, r.symmetric, r.exponential,
                          r.updates_u};
}

}  // namespace

std::string MethodDescriptor::properties() const {
  std::string s;
  if (canonical) s += 'C';
  if (symmetric) s += 'S';
  if (exponential) s += 'E';
  return s;
}

Method::Method(MethodDescriptor descriptor, StepFunction step)
    : descriptor_(std::move(descriptor)), step_(std::move(step)) {
  if (!step_) throw InvalidArgument("Method: missing step function");
}

StepResult Method::step(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                        double h, const StepOptions &opts) const {
  return step_(prob, z, h, opts);
}

ButcherTableau::ButcherTableau(Matrix a_, Vector b_, Vector c_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  const std::size_t s = b.size();
  if (a.dim() != s || c.size() != s)
    throw DimensionError("ButcherTableau: a, b, c sizes disagree");
  for (std::size_t i = 0; i < s; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < s; ++j) row += a(i, j);
    if (std::abs(row - c[i]) > 1e-15)
      throw InvalidArgument("ButcherTableau: c_i must equal the row sum of a");
  }
}

namespace tableaux {

ButcherTableau gauss_legendre4() {
  const double r = kSqrt3 / 6.0;
  return ButcherTableau(Matrix(2, {0.25, 0.25 - r, 0.25 + r, 0.25}), {0.5, 0.5},
                        {kGaussC1, kGaussC2});
}

ButcherTableau implicit_midpoint() { return ButcherTableau(Matrix(1, {0.5}), {1.0}, {0.5}); }

ButcherTableau lobatto3c() {
  return ButcherTableau(Matrix(2, {0.5, -0.5, 0.5, 0.5}), {0.5, 0.5}, {0.0, 1.0});
}

ButcherTableau radau2a() {
  return ButcherTableau(Matrix(2, {5.0 / 12.0, -1.0 / 12.0, 0.75, 0.25}), {0.75, 0.25},
                        {1.0 / 3.0, 1.0});
}

}  // namespace tableaux

ButcherTableau sprk_companion(const ButcherTableau &t) {
  const std::size_t s = t.stages();
  Matrix a_hat(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (t.b[i] == 0.0) throw InvalidArgument("sprk_companion: weights must be nonzero");
    for (std::size_t j = 0; j < s; ++j)
      a_hat(i, j) = t.b[j] - t.a(j, i) * t.b[j] / t.b[i];
  }
  // Row sums of a_hat reproduce c only for symplectic tableaux, so c is
  // recomputed rather than copied.
  Vector c(s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) c[i] += a_hat(i, j);
  return ButcherTableau(a_hat, t.b, c);
}

Matrix exponential_generator(MethodId id, const LinearHamiltonianProblem &prob, double t,
                             double h) {
  switch (id) {
    case MethodId::LieEuler:
      return prob.coefficient(t);
    case MethodId::LieMidpoint:
      return prob.coefficient(t + 0.5 * h);
    case MethodId::LieGauss:
      return lie_gauss_generator(prob, t, h);
    case MethodId::Projection:
      return projection_generator(prob, t, h, kDefaultTol).x;
    case MethodId::ExpNonCan: {
      const Matrix a0 = prob.coefficient(t);
      return noncan_generator(a0, a0, prob.coefficient(t + h), h);
    }
    case MethodId::ExpSymNonCan:
      return noncan_generator(prob.coefficient(t + 0.5 * h), prob.coefficient(t),
                              prob.coefficient(t + h), h);
    default:
      throw NotApplicable("exponential_generator: method is not of the form exp(hX) y");
  }
}

StepResult step_lie_euler(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                          double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_lie_euler");
  return exponential_step(
      prob, z, h, prob.coefficient(z.t),
      [&] { return prob.coefficient_derivative(z.t); }, true, opts);
}

StepResult step_lie_midpoint(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                             double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_lie_midpoint");
  const double tm = z.t + 0.5 * h;
  return exponential_step(
      prob, z, h, prob.coefficient(tm), [&] { return prob.coefficient_derivative(tm); },
      true, opts);
}

StepResult step_lie_gauss(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                          double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_lie_gauss");
  return exponential_step(
      prob, z, h, lie_gauss_generator(prob, z.t, h),
      [&] { return lie_gauss_generator_derivative(prob, z.t, h); }, true, opts);
}

StepResult step_projection(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                           double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_projection");
  ProjectionGenerator gen = projection_generator(prob, z.t, h, opts.tol);
  return exponential_step(
      prob, z, h, gen.x, [&] { return gen.dx; }, true, opts);
}

StepResult step_exp_noncan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                           double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_exp_noncan");
  return exponential_step(
      prob, z, h, exponential_generator(MethodId::ExpNonCan, prob, z.t, h),
      [] { return Matrix(1); }, false, opts);
}

StepResult step_exp_sym_noncan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                               double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_exp_sym_noncan");
  return exponential_step(
      prob, z, h, exponential_generator(MethodId::ExpSymNonCan, prob, z.t, h),
      [] { return Matrix(1); }, false, opts);
}

StepResult step_rk_extended(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                            double h, const ButcherTableau &tableau,
                            const StepOptions &opts) {
  check_step(prob, z, h, "step_rk_extended");
  const std::size_t s = tableau.stages();
  const std::size_t d = prob.dim();
  const Vector &y = z.y.stacked();

  // Stage times are known in advance, so the stage equations
  // Y_i - h sum_j a_ij A(T_j) Y_j = y form one linear system of size s*d.
  std::vector<Matrix> a_stage;
  a_stage.reserve(s);
  for (std::size_t i = 0; i < s; ++i) a_stage.push_back(prob.coefficient(z.t + tableau.c[i] * h));

  Matrix system = Matrix::identity(s * d);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      const double f = h * tableau.a(i, j);
      if (f == 0.0) continue;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) system(i * d + r, j * d + c) -= f * a_stage[j](r, c);
    }
  Vector rhs(s * d);
  for (std::size_t i = 0; i < s; ++i) std::copy(y.begin(), y.end(), rhs.begin() + i * d);

  Vector stacked_stages;
  try {
    stacked_stages = LuDecomposition(std::move(system)).solve(rhs);
  } catch (const SingularMatrix &) {
    throw StageSolveError("step_rk_extended: singular stage system at t = " +
                          std::to_string(z.t));
  }

  Vector y_next = y;
  double u_next = z.u;
  for (std::size_t i = 0; i < s; ++i) {
    std::span<const double> yi(stacked_stages.data() + i * d, d);
    axpy(h * tableau.b[i], a_stage[i] * yi, y_next);
    if (opts.update_u)
      u_next += h * tableau.b[i] *
                energy_rate(prob.coefficient_derivative(z.t + tableau.c[i] * h), yi);
  }
  std::optional<StepDiagnostics> diag;
  if (opts.diagnostics) diag = StepDiagnostics{static_cast<int>(s), 1, std::nullopt};
  return finish(z, h, std::move(y_next), u_next, std::move(diag));
}

StepResult step_kahan(const LinearHamiltonianProblem &prob, const ExtendedPoint &z, double h,
                      const StepOptions &opts) {
  check_step(prob, z, h, "step_kahan");
  const double th = z.t + 0.5 * h;
  const double t1 = z.t + h;
  const Matrix a0 = prob.coefficient(z.t);
  const Matrix ah = prob.coefficient(th);
  const Matrix a1 = prob.coefficient(t1);
  const Matrix id = Matrix::identity(prob.dim());
  const Vector &y = z.y.stacked();

  // Y = y + h(-A0 y/2 + Ah (y + Y) - A1 Y/2)
  const Matrix lhs = id - h * ah + (0.5 * h) * a1;
  const Vector rhs = (id + h * ah - (0.5 * h) * a0) * y;
  Vector y_next;
  try {
    y_next = LuDecomposition(lhs).solve(rhs);
  } catch (const SingularMatrix &) {
    throw StageSolveError("step_kahan: singular system at t = " + std::to_string(z.t));
  }

  double u_next = z.u;
  if (opts.update_u) {
    const Vector mid = scale(0.5, add(y, y_next));
    u_next += h * (-0.5 * energy_rate(prob.coefficient_derivative(z.t), y) +
                   2.0 * energy_rate(prob.coefficient_derivative(th), mid) -
                   0.5 * energy_rate(prob.coefficient_derivative(t1), y_next));
  }
  std::optional<StepDiagnostics> diag;
  if (opts.diagnostics) diag = StepDiagnostics{3, 1, std::nullopt};
  return finish(z, h, std::move(y_next), u_next, std::move(diag));
}

StepResult step_symplectic_euler(const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                                 double h, const StepOptions &opts) {
  check_step(prob, z, h, "step_symplectic_euler");
  const std::size_t n = prob.n();
  // grad H = S y with S = -J A(t) symmetric.
  const Matrix s = -(prob.structure().matrix() * prob.coefficient(z.t));
  const auto q = z.y.q();
  const auto p = z.y.p();

  // P = p - h (S_qq q + S_qp P)
  Matrix lhs = Matrix::identity(n);
  Vector rhs(p.begin(), p.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lhs(i, j) += h * s(i, n + j);
      rhs[i] -= h * s(i, j) * q[j];
    }
  Vector p_next;
  try {
    p_next = LuDecomposition(lhs).solve(rhs);
  } catch (const SingularMatrix &) {
    throw StageSolveError("step_symplectic_euler: singular momentum update");
  }
  // Q = q + h (S_pq q + S_pp P)
  Vector q_next(q.begin(), q.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q_next[i] += h * (s(n + i, j) * q[j] + s(n + i, n + j) * p_next[j]);

  std::optional<StepDiagnostics> diag;
  if (opts.diagnostics) diag = StepDiagnostics{1, 1, std::nullopt};
  return StepResult{ExtendedPoint{PhasePoint(q_next, p_next), z.t + h, z.u}, std::move(diag)};
}

TripleJumpWeights triple_jump_weights(int base_order) {
  if (base_order <= 0 || base_order % 2 != 0)
    throw InvalidArgument("triple_jump_weights: base order must be positive and even");
  const double outer = 1.0 / (2.0 - std::pow(2.0, 1.0 / (base_order + 1)));
  return {outer, 1.0 - 2.0 * outer};
}

Method triple_jump(const Method &base, int base_order) {
  const TripleJumpWeights w = triple_jump_weights(base_order);
  MethodDescriptor d = base.descriptor();
  d.id += "_triple_jump";
  if (d.symmetric) d.order = base_order + 2;
  auto step = [base, w](const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                        double h, const StepOptions &opts) {
    StepResult r1 = base.step(prob, z, w.outer * h, opts);
    StepResult r2 = base.step(prob, r1.z_next, w.inner * h, opts);
    StepResult r3 = base.step(prob, r2.z_next, w.outer * h, opts);
    r3.z_next.t = z.t + h;
    if (opts.diagnostics && r1.diagnostics && r2.diagnostics && r3.diagnostics) {
      StepDiagnostics agg;
      agg.stages = r1.diagnostics->stages + r2.diagnostics->stages + r3.diagnostics->stages;
      agg.solver_iterations = r1.diagnostics->solver_iterations +
                              r2.diagnostics->solver_iterations +
                              r3.diagnostics->solver_iterations;
      r3.diagnostics = agg;
    }
    return r3;
  };
  return Method(std::move(d), std::move(step));
}

double canonical_u_update(const Matrix &m, const Matrix &m_prime, const PhasePoint &y,
                          double u, double h) {
  if (m.dim() != m_prime.dim() || m.dim() != 2 * y.n())
    throw DimensionError("canonical_u_update: dimension mismatch");
  if (h == 0.0 || !std::isfinite(h))
    throw InvalidArgument("canonical_u_update: step size must be finite and nonzero");
  const StructureMatrix j(y.n());
  const double residual = symplectic_residual(m, j);
  if (residual > 1e-10)
    throw NotSymplectic("canonical_u_update: M^T J M - J has norm " + std::to_string(residual) +
                        "; W is not defined");
  const Vector &yv = y.stacked();
  return u + 0.5 * pairing(m * yv, m_prime * yv);
}

Method make_method(MethodId id) {
  auto wrap = [](auto fn) -> StepFunction {
    return [fn](const LinearHamiltonianProblem &prob, const ExtendedPoint &z, double h,
                const StepOptions &opts) { return fn(prob, z, h, opts); };
  };
  auto rk = [](ButcherTableau t) -> StepFunction {
    return [t = std::move(t)](const LinearHamiltonianProblem &prob, const ExtendedPoint &z,
                              double h, const StepOptions &opts) {
      return step_rk_extended(prob, z, h, t, opts);
    };
  };
  const MethodDescriptor d = descriptor_for(id);
  switch (id) {
    case MethodId::LieEuler: return Method(d, wrap(step_lie_euler));
    case MethodId::LieMidpoint: return Method(d, wrap(step_lie_midpoint));
    case MethodId::LieGauss: return Method(d, wrap(step_lie_gauss));
    case MethodId::Projection: return Method(d, wrap(step_projection));
    case MethodId::ExpNonCan: return Method(d, wrap(step_exp_noncan));
    case MethodId::ExpSymNonCan: return Method(d, wrap(step_exp_sym_noncan));
    case MethodId::Kahan: return Method(d, wrap(step_kahan));
    case MethodId::SymplecticEuler: return Method(d, wrap(step_symplectic_euler));
    case MethodId::GaussLegendre4: return Method(d, rk(tableaux::gauss_legendre4()));
    case MethodId::Midpoint: return Method(d, rk(tableaux::implicit_midpoint()));
    case MethodId::Lobatto3C: return Method(d, rk(tableaux::lobatto3c()));
    case MethodId::Radau2A: return Method(d, rk(tableaux::radau2a()));
    case MethodId::LieMidpointTripleJump: return triple_jump(make_method(MethodId::LieMidpoint), 2);
    case MethodId::MidpointTripleJump: return triple_jump(make_method(MethodId::Midpoint), 2);
    case MethodId::KahanTripleJump: return triple_jump(make_method(MethodId::Kahan), 2);
  }
  throw InvalidArgument("make_method: unknown method id");
}

std::string_view to_string(MethodId id) { return row_for(id).name; }

MethodId method_id_from_string(std::string_view id) {
  if (id == kLobattoRow.name) return MethodId::Lobatto3C;
  for (const auto &r : kDescriptors)
    if (id == r.name) return r.id;
  throw InvalidArgument("unknown method id '" + std::string(id) + "'");
}

Method make_method(std::string_view id) { return make_method(method_id_from_string(id)); }

const std::vector<MethodId> &table_method_ids() {
  static const std::vector<MethodId> ids = [] {
    std::vector<MethodId> v;
    for (const auto &r : kDescriptors) v.push_back(r.id);
    return v;
  }();
  return ids;
}

const std::vector<MethodId> &all_method_ids() {
  static const std::vector<MethodId> ids = [] {
    std::vector<MethodId> v = table_method_ids();
    v.push_back(MethodId::Lobatto3C);
    return v;
  }();
  return ids;
}

}  // namespace hamext
