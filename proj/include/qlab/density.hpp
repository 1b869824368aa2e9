#pragma once

// Density matrices, basis changes, dephasing and the dephasing/basis-change
// non-commutation defect.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/linalg.hpp"

namespace qlab {

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Normalised column of amplitudes.
class StateVector {
public:
  explicit StateVector(ComplexMatrix amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.cols() != 1) throw DimensionError("state vector must be a column");
    const double norm = frobenius_norm(amps_);
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw PreconditionError("state vector norm " + std::to_string(norm) + " is not 1");
  }

  /// Rescales to unit norm; throws on the zero vector.
  static StateVector normalized(std::vector<complex> amplitudes) {
    auto col = ComplexMatrix::column(std::move(amplitudes));
    const double norm = frobenius_norm(col);
    if (norm == 0.0) throw PreconditionError("cannot normalise the zero vector");
    return StateVector((1.0 / norm) * col);
  }

  const ComplexMatrix& amplitudes() const noexcept { return amps_; }
  std::size_t dim() const noexcept { return amps_.rows(); }
  complex operator[](std::size_t i) const { return amps_(i, 0); }

private:
  ComplexMatrix amps_;
};

/// Unitary C; a density A is expressed in the new basis as C A C^dagger.
class BasisChange {
public:
  explicit BasisChange(ComplexMatrix c) : c_(std::move(c)) {
    detail::require_square(c_, "basis change");
    const double defect = frobenius_norm(c_ * adjoint(c_) - ComplexMatrix::identity(c_.rows()));
    if (defect >= kUnitaryTolerance)
      throw PreconditionError("basis change is not unitary (||CC^dagger - I|| = " +
                              std::to_string(defect) + ")");
  }

  static BasisChange identity(std::size_t n) { return BasisChange(ComplexMatrix::identity(n)); }

  /// Maps |0>,|1> to (|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2; self-inverse.
  static BasisChange hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return BasisChange(ComplexMatrix{{r, r}, {r, -r}});
  }

  const ComplexMatrix& matrix() const noexcept { return c_; }
  std::size_t dim() const noexcept { return c_.rows(); }
  BasisChange inverse() const { return BasisChange(adjoint(c_)); }

private:
  ComplexMatrix c_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Every constructor path validates the invariants. The label is free text and
/// takes no part in equality.
class DensityMatrix {
public:
  struct Options {
    /// Clip eigenvalues below zero and renormalise instead of rejecting.
    bool repair = false;
  };

  explicit DensityMatrix(ComplexMatrix m, std::optional<std::string> label = std::nullopt)
      : DensityMatrix(std::move(m), Options{}, std::move(label)) {}

  DensityMatrix(ComplexMatrix m, Options opts, std::optional<std::string> label = std::nullopt)
      : m_(std::move(m)), label_(std::move(label)) {
    detail::require_square(m_, "density matrix");
    if (!is_hermitian(m_)) throw PreconditionError("density matrix is not Hermitian");
    m_ = 0.5 * (m_ + adjoint(m_));
    if (opts.repair) {
      auto eig = eig_hermitian(m_);
      double total = 0.0;
      for (double& l : eig.eigenvalues) total += (l = std::max(l, 0.0));
      if (total <= 0.0) throw PreconditionError("density matrix has no positive spectrum");
      for (double& l : eig.eigenvalues) l /= total;
      m_ = eig.reconstruct();
      m_ = 0.5 * (m_ + adjoint(m_));
    }
    const complex tr = trace(m_);
    if (std::abs(tr - 1.0) > kTraceTolerance)
      throw PreconditionError("density matrix trace " + std::to_string(tr.real()) + " is not 1");
    const auto eig = eig_hermitian(m_);
    if (eig.eigenvalues.front() < kPsdFloor)
      throw PreconditionError("density matrix has negative eigenvalue " +
                              std::to_string(eig.eigenvalues.front()));
  }

  static DensityMatrix maximally_mixed(std::size_t n) {
    return DensityMatrix((1.0 / static_cast<double>(n)) * ComplexMatrix::identity(n));
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const std::optional<std::string>& label() const noexcept { return label_; }

  DensityMatrix with_label(std::string label) const {
    DensityMatrix out = *this;
    out.label_ = std::move(label);
    return out;
  }

  friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) { return a.m_ == b.m_; }

private:
  ComplexMatrix m_;
  std::optional<std::string> label_;
};

namespace detail {
inline void require_dims(std::size_t a, std::size_t b, const char* op) {
  if (a != b)
    throw DimensionError(std::string(op) + ": dimension " + std::to_string(a) + " vs " +
                         std::to_string(b));
}
inline ComplexMatrix zero_offdiagonal(ComplexMatrix m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c) m(r, c) = 0.0;
  return m;
}
}  // namespace detail

/// psi psi^dagger
inline DensityMatrix pure_state_density(const StateVector& psi) {
  return DensityMatrix(outer_product(psi.amplitudes(), psi.amplitudes()));
}

/// e^{-H/kT} / Tr e^{-H/kT}, built in the eigenbasis of H.
inline DensityMatrix gibbs_density(const ComplexMatrix& h, double kT) {
  if (!(kT > 0.0)) throw PreconditionError("gibbs_density: kT must be positive");
  const auto eig = eig_hermitian(h);
  // Shift by the ground energy so the largest weight is exactly 1.
  const double ground = eig.eigenvalues.front();
  double z = 0.0;
  for (double l : eig.eigenvalues) z += std::exp(-(l - ground) / kT);
  auto rho = eig.apply([&](double l) { return complex(std::exp(-(l - ground) / kT) / z); });
  return DensityMatrix(0.5 * (rho + adjoint(rho)), "gibbs");
}

/// Shannon entropy -sum p ln p in nats, with 0 ln 0 = 0.
inline double shannon_entropy(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

/// -Tr rho ln rho in nats. Eigenvalues within the PSD floor count as zero.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  auto eig = eig_hermitian(rho.matrix());
  for (double& l : eig.eigenvalues) l = std::max(l, 0.0);
  return std::max(0.0, shannon_entropy(eig.eigenvalues));
}

/// Tr rho^2
inline double purity(const DensityMatrix& rho) {
  // Tr(rho rho) = sum |rho_ij|^2 for Hermitian rho.
  const double p = frobenius_norm(rho.matrix());
  return p * p;
}

/// C rho C^dagger
inline DensityMatrix change_basis(const DensityMatrix& rho, const BasisChange& c) {
  detail::require_dims(rho.dim(), c.dim(), "change_basis");
  return DensityMatrix(c.matrix() * rho.matrix() * adjoint(c.matrix()));
}

/// Zeroes the off-diagonal entries of rho as seen in `basis`, then returns to the
/// original frame: C^dagger diag(C rho C^dagger) C.
inline DensityMatrix dephase(const DensityMatrix& rho, const BasisChange& basis) {
  detail::require_dims(rho.dim(), basis.dim(), "dephase");
  const auto& c = basis.matrix();
  const auto in_basis = detail::zero_offdiagonal(c * rho.matrix() * adjoint(c));
  return DensityMatrix(adjoint(c) * in_basis * c);
}

/// ||D(rho) - C^dagger D(C rho C^dagger) C||_F where D dephases in the current
/// basis. Vanishes when C permutes the basis up to phases.
inline double dephasing_commutator_defect(const DensityMatrix& rho, const BasisChange& c) {
  detail::require_dims(rho.dim(), c.dim(), "dephasing_commutator_defect");
  const auto direct = detail::zero_offdiagonal(rho.matrix());
  const auto conjugated = dephase(rho, c).matrix();
  return frobenius_norm(direct - conjugated);
}

/// Outcome probabilities of a projective measurement in `basis`: diag(C rho C^dagger).
inline std::vector<double> measurement_probabilities(const DensityMatrix& rho,
                                                     const BasisChange& basis) {
  detail::require_dims(rho.dim(), basis.dim(), "measurement_probabilities");
  const auto& c = basis.matrix();
  const auto m = c * rho.matrix() * adjoint(c);
  std::vector<double> p(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) p[i] = m(i, i).real();
  return p;
}

/// Equal superposition (|alive> + |dead>)/sqrt2 in basis A = (|alive>, |dead>).
inline StateVector cat_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateVector(ComplexMatrix::column({r, r}));
}

inline DensityMatrix cat_density() { return pure_state_density(cat_state()).with_label("A"); }

}  // namespace qlab
