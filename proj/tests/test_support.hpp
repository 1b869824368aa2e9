#pragma once

// Generators and comparison helpers shared by the unit and acceptance suites.
// Random unitaries come from Gram-Schmidt, not from the library's exponential,
// so they stay independent of the code under test.

#include <cmath>
#include <cstdint>
#include <vector>

#include "qlab/linalg.hpp"
#include "qlab/rng.hpp"

namespace qlab::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double re = rng.uniform_pm1();
      m(r, c) = complex(re, rng.uniform_pm1());
    }
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, SplitMix64& rng, double scale = 1.0) {
  const auto r = random_matrix(n, n, rng);
  return complex(0.5 * scale) * (r + adjoint(r));
}

/// Orthonormalised columns of a random complex matrix.
inline ComplexMatrix random_unitary(std::size_t n, SplitMix64& rng) {
  auto m = random_matrix(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      complex proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(m(i, k)) * m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) -= proj * m(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(m(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

/// Random permutation matrix with random unit phases on its nonzero entries.
inline ComplexMatrix random_phased_permutation(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, perm[i]) = std::polar(1.0, 3.14159 * rng.uniform_pm1());
  return m;
}

/// Random density matrix A A^dagger / Tr(A A^dagger) of the given rank.
inline ComplexMatrix random_density(std::size_t n, SplitMix64& rng, std::size_t rank = 0) {
  const auto a = random_matrix(n, rank == 0 ? n : rank, rng);
  auto rho = a * adjoint(a);
  const complex tr = trace(rho);
  rho = complex(1.0 / tr.real()) * rho;
  return complex(0.5) * (rho + adjoint(rho));
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

/// Eigenvalues of a 2x2 Hermitian matrix from the characteristic polynomial.
inline std::vector<double> eigenvalues_2x2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {0.5 * (a + d) - disc, 0.5 * (a + d) + disc};
}

}  // namespace qlab::testing

namespace qlab::testing {

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
double golden_section_max(F&& f, double a, double b, int iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Random distributions with the same normalisation and mean energy as `p`:
/// p + t d with d a Gaussian direction projected onto the null space of the two
/// constraints and t uniform in [0.01, 1] times the largest step keeping p >= 0.
class FeasibleSampler {
public:
  FeasibleSampler(std::vector<double> p, std::vector<double> energies)
      : p_(std::move(p)), e_(std::move(energies)) {}

  std::vector<double> sample(SplitMix64& rng) const {
    const std::size_t n = p_.size();
    std::vector<double> d(n);
    for (double& x : d) {
      // Box-Muller
      const double u1 = 1.0 - rng.uniform01();
      const double u2 = rng.uniform01();
      x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }
    // Orthonormal basis of span{1, e} by Gram-Schmidt, then remove it from d.
    std::vector<double> q1(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> q2 = e_;
    const double dot_e = dot(q2, q1);
    for (std::size_t i = 0; i < n; ++i) q2[i] -= dot_e * q1[i];
    const double n2 = std::sqrt(dot(q2, q2));
    for (double& x : q2) x /= n2;
    const double a1 = dot(d, q1), a2 = dot(d, q2);
    for (std::size_t i = 0; i < n; ++i) d[i] -= a1 * q1[i] + a2 * q2[i];
    double t_max = INFINITY;
    for (std::size_t i = 0; i < n; ++i)
      if (d[i] < 0.0) t_max = std::min(t_max, -p_[i] / d[i]);
    const double t = t_max * (0.01 + 0.99 * rng.uniform01());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, p_[i] + t * d[i]);
    return out;
  }

private:
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  std::vector<double> p_;
  std::vector<double> e_;
};

}  // namespace qlab::testing
