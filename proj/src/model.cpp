#include "hamext/model.hpp"

#include <cmath>
#include <string>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

void check_finite_vector(std::span<const double> v, const char *what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + ": non-finite component");
}

void check_point(const LinearHamiltonianProblem &prob, const PhasePoint &y,
                 const char *what) {
  if (y.n() != prob.n())
    throw DimensionError(std::string(what) + ": point has n = " + std::to_string(y.n()) +
                         ", problem has n = " + std::to_string(prob.n()));
}

// -1/2 y^T J B y
double quadratic_form(const StructureMatrix &j, const Matrix &b, const Vector &y) {
  const Vector by = b * y;
  const std::size_t n = j.n();
  // y^T J v = q . v_p - p . v_q
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += y[i] * by[n + i] - y[n + i] * by[i];
  return -0.5 * s;
}

}  // namespace

PhasePoint::PhasePoint(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size())
    throw DimensionError("PhasePoint: q and p lengths differ");
  if (q.empty()) throw DimensionError("PhasePoint: n must be positive");
  data_.reserve(2 * q.size());
  data_.insert(data_.end(), q.begin(), q.end());
  data_.insert(data_.end(), p.begin(), p.end());
  check_finite_vector(data_, "PhasePoint");
}

PhasePoint::PhasePoint(Vector stacked) : data_(std::move(stacked)) {
  if (data_.empty() || data_.size() % 2 != 0)
    throw DimensionError("PhasePoint: stacked length must be even and positive");
  check_finite_vector(data_, "PhasePoint");
}

Vector ExtendedPoint::flatten() const {
  Vector z = y.stacked();
  z.push_back(t);
  z.push_back(u);
  return z;
}

ExtendedPoint ExtendedPoint::unflatten(std::span<const double> z) {
  if (z.size() < 4 || z.size() % 2 != 0)
    throw DimensionError("ExtendedPoint: flattened length must be 2n + 2");
  const std::size_t d = z.size() - 2;
  return ExtendedPoint{PhasePoint(Vector(z.begin(), z.begin() + d)), z[d], z[d + 1]};
}

LinearHamiltonianProblem::LinearHamiltonianProblem(std::size_t n, MatrixFunction coefficient,
                                                   MatrixFunction coefficient_derivative)
    : n_(n), j_(n), a_(std::move(coefficient)), da_(std::move(coefficient_derivative)) {
  if (n == 0) throw DimensionError("LinearHamiltonianProblem: n must be positive");
  if (!a_ || !da_) throw InvalidArgument("LinearHamiltonianProblem: missing coefficient function");
}

Matrix LinearHamiltonianProblem::coefficient(double t) const {
  Matrix a = a_(t);
  if (a.dim() != dim()) throw DimensionError("coefficient: A(t) has wrong dimension");
  return a;
}

Matrix LinearHamiltonianProblem::coefficient_derivative(double t) const {
  Matrix da = da_(t);
  if (da.dim() != dim()) throw DimensionError("coefficient_derivative: A'(t) has wrong dimension");
  return da;
}

LinearHamiltonianProblem LinearHamiltonianProblem::autonomous(const Matrix &a) {
  if (a.dim() % 2 != 0) throw DimensionError("autonomous: dimension must be even");
  const std::size_t d = a.dim();
  return LinearHamiltonianProblem(
      d / 2, [a](double) { return a; }, [d](double) { return Matrix(d); });
}

LinearHamiltonianProblem PerturbedOscillator::problem() const {
  if (n == 0) throw DimensionError("PerturbedOscillator: n must be positive");
  const std::size_t dim = 2 * n;
  const std::size_t nn = n;
  const double eps = epsilon;
  const double al = alpha;
  auto coefficient = [nn, dim, eps, al](double t) {
    Matrix a(dim);
    const double stiffness = 1.0 + eps * std::sin(al * t);
    for (std::size_t i = 0; i < nn; ++i) {
      a(i, nn + i) = 1.0;
      a(nn + i, i) = -stiffness;
    }
    return a;
  };
  auto derivative = [nn, dim, eps, al](double t) {
    Matrix a(dim);
    const double ds = eps * al * std::cos(al * t);
    for (std::size_t i = 0; i < nn; ++i) a(nn + i, i) = -ds;
    return a;
  };
  return LinearHamiltonianProblem(n, coefficient, derivative);
}

double hamiltonian(const LinearHamiltonianProblem &prob, const PhasePoint &y, double t) {
  check_point(prob, y, "hamiltonian");
  return quadratic_form(prob.structure(), prob.coefficient(t), y.stacked());
}

double hamiltonian_time_derivative(const LinearHamiltonianProblem &prob,
                                   const PhasePoint &y, double t) {
  check_point(prob, y, "hamiltonian_time_derivative");
  return quadratic_form(prob.structure(), prob.coefficient_derivative(t), y.stacked());
}

Vector extended_vector_field(const LinearHamiltonianProblem &prob, const ExtendedPoint &z) {
  check_point(prob, z.y, "extended_vector_field");
  Vector f = prob.coefficient(z.t) * z.y.stacked();
  f.push_back(1.0);
  f.push_back(-hamiltonian_time_derivative(prob, z.y, z.t));
  return f;
}

double extended_hamiltonian(const LinearHamiltonianProblem &prob, const ExtendedPoint &z) {
  return hamiltonian(prob, z.y, z.t) + z.u;
}

ExtendedPoint initial_point(const LinearHamiltonianProblem &prob, const PhasePoint &y0,
                            double t0) {
  return ExtendedPoint{y0, t0, -hamiltonian(prob, y0, t0)};
}

}  // namespace hamext
