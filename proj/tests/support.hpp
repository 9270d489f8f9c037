#pragma once

#include <random>

#include "hamext/integrators.hpp"

namespace hamext::testing {

inline Matrix random_matrix(std::size_t dim, std::mt19937_64 &rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = dist(rng);
  return m;
}

// X = J S with S symmetric lies in sp(2n).
inline Matrix random_sp(std::size_t n, std::mt19937_64 &rng, double scale = 1.0) {
  const Matrix g = random_matrix(2 * n, rng, scale);
  const Matrix s = 0.5 * (g + transpose(g));
  return StructureMatrix(n).matrix() * s;
}

// J S with S positive definite: purely imaginary spectrum, bounded flow.
inline Matrix random_stable_sp(std::size_t n, std::mt19937_64 &rng, double scale = 1.0) {
  const Matrix g = random_matrix(2 * n, rng, scale);
  const Matrix s = g * transpose(g) + (scale * scale) * Matrix::identity(2 * n);
  return StructureMatrix(n).matrix() * s;
}

inline Vector random_vector(std::size_t dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(dim);
  for (double &x : v) x = dist(rng);
  return v;
}

// A(t) = A0 + sin(w t) A1 with both parts in sp(2n).
inline LinearHamiltonianProblem random_problem(std::size_t n, std::mt19937_64 &rng,
                                               double w = 1.3) {
  const Matrix a0 = random_sp(n, rng, 0.5);
  const Matrix a1 = random_sp(n, rng, 0.5);
  return LinearHamiltonianProblem(
      n, [=](double t) { return a0 + std::sin(w * t) * a1; },
      [=](double t) { return (w * std::cos(w * t)) * a1; });
}

inline PerturbedOscillator table_oscillator() { return {4, 0.1, 0.123}; }

inline ExtendedPoint table_start(const LinearHamiltonianProblem &prob) {
  const Vector q{1.0, 2.0, 3.0, 4.0}, p{4.0, 1.0, 2.0, 3.0};
  return initial_point(prob, PhasePoint(q, p), 0.0);
}

}  // namespace hamext::testing
