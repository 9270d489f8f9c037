#include <gtest/gtest.h>

#include <random>

#include "hamext/errors.hpp"
#include "hamext/model.hpp"
#include "support.hpp"

using namespace hamext;

namespace {

const LinearHamiltonianProblem kSmall = PerturbedOscillator{1, 0.3, 0.1}.problem();

PhasePoint point1(double q, double p) { return PhasePoint(Vector{q, p}); }

}  // namespace

TEST(PhasePoint, SplitsStackedVector) {
  const PhasePoint y(Vector{1, 2, 3, 4});
  EXPECT_EQ(y.n(), 2u);
  EXPECT_EQ(y.q()[1], 2.0);
  EXPECT_EQ(y.p()[0], 3.0);
}

TEST(PhasePoint, RejectsOddLength) {
  EXPECT_THROW(PhasePoint(Vector{1, 2, 3}), DimensionError);
}

TEST(ExtendedPoint, FlattenRoundTrip) {
  const ExtendedPoint z{PhasePoint(Vector{1, 2, 3, 4}), 0.5, -2.0};
  const Vector flat = z.flatten();
  EXPECT_EQ(flat, (Vector{1, 2, 3, 4, 0.5, -2.0}));
  EXPECT_EQ(ExtendedPoint::unflatten(flat), z);
}

TEST(Oscillator, CoefficientShape) {
  const auto prob = PerturbedOscillator{2, 0.3, 0.1}.problem();
  const Matrix a = prob.coefficient(2.0);
  const double s = 1.0 + 0.3 * std::sin(0.2);
  EXPECT_EQ(a(0, 2), 1.0);
  EXPECT_EQ(a(1, 3), 1.0);
  EXPECT_DOUBLE_EQ(a(2, 0), -s);
  EXPECT_DOUBLE_EQ(a(3, 1), -s);
  EXPECT_EQ(a(0, 0), 0.0);
}

TEST(Oscillator, CoefficientInSpAndDerivativeConsistent) {
  const auto prob = PerturbedOscillator{3, 0.1, 0.123}.problem();
  const StructureMatrix &j = prob.structure();
  for (double t : {0.0, 1.7, 25.0, 400.0}) {
    EXPECT_LT(algebra_residual(prob.coefficient(t), j), 1e-13);
    const double d = 1e-4;
    const Matrix fd = (1.0 / (2 * d)) * (prob.coefficient(t + d) - prob.coefficient(t - d));
    EXPECT_LT(frobenius_norm(fd - prob.coefficient_derivative(t)), 1e-6);
  }
}

TEST(Hamiltonian, Examples) {
  EXPECT_DOUBLE_EQ(hamiltonian(kSmall, point1(1, 0), 0.0), 0.5);
  EXPECT_EQ(hamiltonian(kSmall, point1(0, 0), 3.0), 0.0);
  const auto prob = hamext::testing::table_oscillator().problem();
  const ExtendedPoint z = hamext::testing::table_start(prob);
  EXPECT_DOUBLE_EQ(hamiltonian(prob, z.y, 0.0), 30.0);
  EXPECT_DOUBLE_EQ(z.u, -30.0);
  EXPECT_DOUBLE_EQ(extended_hamiltonian(prob, z), 0.0);
}

TEST(Hamiltonian, DimensionMismatchThrows) {
  EXPECT_THROW((void)hamiltonian(kSmall, PhasePoint(Vector{1, 2, 3, 4}), 0.0), DimensionError);
}

TEST(Hamiltonian, TimeDerivativeExamples) {
  EXPECT_NEAR(hamiltonian_time_derivative(kSmall, point1(2, 5), 0.0), 0.06, 1e-15);
  EXPECT_EQ(hamiltonian_time_derivative(kSmall, point1(0, 0), 1.0), 0.0);
  std::mt19937_64 rng(1);
  const auto autonomous =
      LinearHamiltonianProblem::autonomous(hamext::testing::random_sp(2, rng));
  EXPECT_EQ(hamiltonian_time_derivative(autonomous, PhasePoint(Vector{1, 2, 3, 4}), 0.0), 0.0);
}

TEST(Hamiltonian, TimeDerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(2);
  const auto prob = hamext::testing::random_problem(2, rng);
  for (int k = 0; k < 5; ++k) {
    const PhasePoint y(hamext::testing::random_vector(4, rng));
    const double t = 0.7 * k;
    const double d = 1e-5;
    const double fd = (hamiltonian(prob, y, t + d) - hamiltonian(prob, y, t - d)) / (2 * d);
    EXPECT_NEAR(hamiltonian_time_derivative(prob, y, t), fd, 1e-8);
  }
}

TEST(VectorField, Examples) {
  const ExtendedPoint z = initial_point(kSmall, point1(1, 2), 0.0);
  const Vector f = extended_vector_field(kSmall, z);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(f[0], 2.0);
  EXPECT_DOUBLE_EQ(f[1], -1.0);
  EXPECT_EQ(f[2], 1.0);
  EXPECT_NEAR(f[3], -0.015, 1e-16);

  const ExtendedPoint zero{point1(0, 0), 2.0, 1.0};
  EXPECT_EQ(extended_vector_field(kSmall, zero), (Vector{0, 0, 1, 0}));
}

TEST(VectorField, IsHamiltonianGradient) {
  std::mt19937_64 rng(3);
  const auto prob = hamext::testing::random_problem(2, rng);
  const Matrix &jm = prob.structure().matrix();
  for (int k = 0; k < 5; ++k) {
    const Vector y = hamext::testing::random_vector(4, rng);
    const double t = 0.3 * k;
    Vector grad(4);
    for (std::size_t i = 0; i < 4; ++i) {
      Vector yp = y, ym = y;
      yp[i] += 1e-6;
      ym[i] -= 1e-6;
      grad[i] = (hamiltonian(prob, PhasePoint(yp), t) - hamiltonian(prob, PhasePoint(ym), t)) / 2e-6;
    }
    // q' = H_p, p' = -H_q
    const Vector expected = jm * grad;
    const Vector f = extended_vector_field(prob, ExtendedPoint{PhasePoint(y), t, 0.0});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(f[i], expected[i], 1e-6);
  }
}

TEST(Problem, RejectsWrongDimension) {
  const LinearHamiltonianProblem bad(2, [](double) { return Matrix(3); },
                                     [](double) { return Matrix(3); });
  EXPECT_THROW((void)bad.coefficient(0.0), DimensionError);
}
