#pragma once

// Dense complex matrices for small dimensions: arithmetic, Kronecker products,
// partial trace, and a cyclic Jacobi eigensolver for Hermitian input.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qlab/error.hpp"

namespace qlab {

using complex = std::complex<double>;

inline constexpr complex I{0.0, 1.0};

/// Row-major dense complex matrix. Column vectors are n x 1 matrices.
class ComplexMatrix {
public:
  ComplexMatrix() = default;

  /// Zero matrix of the given shape.
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
      throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw PreconditionError("matrix entries must be finite");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ComplexMatrix column(std::vector<complex> v) {
    const auto n = v.size();
    return ComplexMatrix(n, 1, std::move(v));
  }

  /// Computational basis vector |index> of dimension n.
  static ComplexMatrix basis_vector(std::size_t n, std::size_t index) {
    ComplexMatrix v(n, 1);
    v(index, 0) = 1.0;
    return v;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const std::vector<complex>& entries() const noexcept { return data_; }

  complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

namespace detail {
inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}
inline void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) throw DimensionError(std::string(op) + ": matrix must be square");
}
}  // namespace detail

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_same_shape(a, b, "sum");
  ComplexMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) += b(r, c);
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_same_shape(a, b, "difference");
  ComplexMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

inline ComplexMatrix operator*(complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) *= s;
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("product: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

/// Conjugate transpose.
inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline complex trace(const ComplexMatrix& a) {
  detail::require_square(a, "trace");
  complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

/// Frobenius norm of the strictly off-diagonal part.
inline double offdiagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

/// <u|v> for column vectors (conjugate-linear in the first argument).
inline complex inner_product(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.cols() != 1 || v.cols() != 1 || u.rows() != v.rows())
    throw DimensionError("inner product needs column vectors of equal length");
  complex s = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i) s += std::conj(u(i, 0)) * v(i, 0);
  return s;
}

/// |u><v| for column vectors.
inline ComplexMatrix outer_product(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.cols() != 1 || v.cols() != 1) throw DimensionError("outer product needs column vectors");
  ComplexMatrix out(u.rows(), v.rows());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < v.rows(); ++j) out(i, j) = u(i, 0) * std::conj(v(j, 0));
  return out;
}

/// ||A - A^dagger||_F; zero for exactly Hermitian input.
inline double hermitian_residual(const ComplexMatrix& a) {
  detail::require_square(a, "hermitian check");
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) s += std::norm(a(r, c) - std::conj(a(c, r)));
  return std::sqrt(s);
}

/// Absolute Hermiticity tolerance, scaled up for matrices with large norm.
inline constexpr double kHermitianTolerance = 1e-10;

inline bool is_hermitian(const ComplexMatrix& a) {
  return a.is_square() &&
         hermitian_residual(a) <= kHermitianTolerance * std::max(1.0, frobenius_norm(a));
}

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

/// Traces out the second (environment) factor of a system (x) environment operator.
inline ComplexMatrix partial_trace_env(const ComplexMatrix& m, std::size_t dim_system,
                                       std::size_t dim_env) {
  if (dim_system == 0 || dim_env == 0) throw DimensionError("factor dimensions must be positive");
  if (!m.is_square() || m.rows() != dim_system * dim_env)
    throw DimensionError("partial trace: operator is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square of size " +
                         std::to_string(dim_system * dim_env));
  ComplexMatrix out(dim_system, dim_system);
  for (std::size_t i = 0; i < dim_system; ++i)
    for (std::size_t j = 0; j < dim_system; ++j) {
      complex s = 0.0;
      for (std::size_t k = 0; k < dim_env; ++k) s += m(i * dim_env + k, j * dim_env + k);
      out(i, j) = s;
    }
  return out;
}

/// Spectrum of a Hermitian matrix. Columns of `eigenvectors` pair with `eigenvalues`.
struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary
  /// ||H - H^dagger||_F of the input before it was replaced by (H + H^dagger)/2.
  double symmetrization_residual = 0.0;
  int sweeps = 0;

  /// V diag(f(lambda)) V^dagger.
  template <class F>
  ComplexMatrix apply(F&& f) const {
    const auto n = eigenvalues.size();
    ComplexMatrix out(n, n);
    std::vector<complex> fl(n);
    for (std::size_t k = 0; k < n; ++k) fl[k] = f(eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          s += eigenvectors(i, k) * fl[k] * std::conj(eigenvectors(j, k));
        out(i, j) = s;
      }
    return out;
  }

  ComplexMatrix reconstruct() const {
    return apply([](double l) { return complex(l); });
  }
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelativeTarget = 1e-14;

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot a(p,q) with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation. Sweeps stop once the
/// off-diagonal Frobenius norm drops below 1e-14 ||H||_F. Eigenvalues come back
/// ascending (stable with respect to the Jacobi diagonal order); every eigenvector
/// has its first component of modulus > 1e-8 made real and positive.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& h) {
  detail::require_square(h, "eig_hermitian");
  const double residual = hermitian_residual(h);
  if (residual > kHermitianTolerance * std::max(1.0, frobenius_norm(h)))
    throw PreconditionError("eig_hermitian: input is not Hermitian (residual " +
                            std::to_string(residual) + ")");

  const std::size_t n = h.rows();
  ComplexMatrix a = 0.5 * (h + adjoint(h));
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = kJacobiRelativeTarget * frobenius_norm(a);

  int sweep = 0;
  for (; offdiagonal_norm(a) > target; ++sweep) {
    if (sweep >= kJacobiMaxSweeps)
      throw NumericalFailure("eig_hermitian: no convergence after " +
                             std::to_string(kJacobiMaxSweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex b = a(p, q);
        const double mag = std::abs(b);
        if (mag == 0.0 || mag < 1e-3 * target / static_cast<double>(n)) continue;
        const complex phase = b / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        const complex cphase = std::conj(phase);

        // A <- A J with J = diag(1, e^{-i phi}) R on the (p, q) plane.
        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = a(k, p);
          const complex akq = a(k, q);
          a(k, p) = c * akp - s * cphase * akq;
          a(k, q) = s * akp + c * cphase * akq;
          const complex vkp = v(k, p);
          const complex vkq = v(k, q);
          v(k, p) = c * vkp - s * cphase * vkq;
          v(k, q) = s * vkp + c * cphase * vkq;
        }
        // A <- J^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = a(p, k);
          const complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n), residual, sweep};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    complex fix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(v(i, src));
      if (m > 1e-8) {
        fix = std::conj(v(i, src)) / m;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * fix;
    // The leading component is real by construction; drop rounding residue.
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(out.eigenvectors(i, k)) > 1e-8) {
        out.eigenvectors(i, k) = out.eigenvectors(i, k).real();
        break;
      }
  }
  return out;
}

/// exp(s H) for Hermitian H, e.g. s = -i t for time evolution or s = -1/kT.
inline ComplexMatrix exp_hermitian_scaled(const ComplexMatrix& h, complex s) {
  return eig_hermitian(h).apply([s](double l) { return std::exp(s * l); });
}

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, -I}, {I, 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace qlab
