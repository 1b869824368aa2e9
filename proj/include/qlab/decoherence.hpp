#pragma once

// System-environment pointer dynamics and scattering-channel models.
//
// The composite space is system (x) environment with the system index major:
// amplitude of |n>|k> sits at n * dim_env + k.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/linalg.hpp"
#include "qlab/rng.hpp"

namespace qlab {

inline constexpr std::size_t kMaxEnvDim = 32;
inline constexpr std::size_t kMaxCompositeDim = 128;

/// Normalised state on the system (x) environment space.
class CompositeState {
public:
  CompositeState(ComplexMatrix amplitudes, std::size_t dim_system, std::size_t dim_env)
      : amps_(std::move(amplitudes)), ds_(dim_system), de_(dim_env) {
    if (ds_ == 0 || de_ == 0) throw DimensionError("composite factors must have positive dimension");
    if (amps_.cols() != 1 || amps_.rows() != ds_ * de_)
      throw DimensionError("composite amplitudes must be a column of length " +
                           std::to_string(ds_ * de_));
    const double norm = frobenius_norm(amps_);
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw PreconditionError("composite state norm " + std::to_string(norm) + " is not 1");
  }

  static CompositeState product(const StateVector& system, const StateVector& env) {
    return CompositeState(tensor_product(system.amplitudes(), env.amplitudes()), system.dim(),
                          env.dim());
  }

  const ComplexMatrix& amplitudes() const noexcept { return amps_; }
  std::size_t dim_system() const noexcept { return ds_; }
  std::size_t dim_env() const noexcept { return de_; }

  /// Purity of |Psi><Psi|, which is |<Psi|Psi>|^2.
  double purity() const { return std::norm(inner_product(amps_, amps_)); }

private:
  ComplexMatrix amps_;
  std::size_t ds_;
  std::size_t de_;
};

/// H_int = sum_n |n><n| (x) B_n with one Hermitian environment operator per
/// system basis state.
class PointerInteraction {
public:
  explicit PointerInteraction(std::vector<ComplexMatrix> couplings) : b_(std::move(couplings)) {
    if (b_.empty()) throw DimensionError("pointer interaction needs at least one coupling");
    const std::size_t de = b_.front().rows();
    if (de > kMaxEnvDim)
      throw DimensionError("environment dimension " + std::to_string(de) + " exceeds " +
                           std::to_string(kMaxEnvDim));
    if (b_.size() * de > kMaxCompositeDim)
      throw DimensionError("composite dimension " + std::to_string(b_.size() * de) + " exceeds " +
                           std::to_string(kMaxCompositeDim));
    for (const auto& b : b_) {
      if (!b.is_square() || b.rows() != de)
        throw DimensionError("pointer couplings must share one square environment shape");
      if (!is_hermitian(b)) throw PreconditionError("pointer couplings must be Hermitian");
    }
  }

  /// B_0 = +g sigma_x, B_1 = -g sigma_x on a qubit environment.
  static PointerInteraction sigma_x_coupling(double g) {
    return PointerInteraction({complex(g) * pauli::x(), complex(-g) * pauli::x()});
  }

  const std::vector<ComplexMatrix>& couplings() const noexcept { return b_; }
  std::size_t dim_system() const noexcept { return b_.size(); }
  std::size_t dim_env() const noexcept { return b_.front().rows(); }

  ComplexMatrix hamiltonian() const {
    const std::size_t ds = dim_system();
    ComplexMatrix h(ds * dim_env(), ds * dim_env());
    for (std::size_t n = 0; n < ds; ++n) {
      const auto block = tensor_product(outer_product(ComplexMatrix::basis_vector(ds, n),
                                                      ComplexMatrix::basis_vector(ds, n)),
                                        b_[n]);
      h = h + block;
    }
    return h;
  }

private:
  std::vector<ComplexMatrix> b_;
};

/// exp(-i H_int t) applied to the full composite state.
inline CompositeState evolve_composite(const CompositeState& initial,
                                       const PointerInteraction& interaction, double t) {
  if (initial.dim_system() != interaction.dim_system() || initial.dim_env() != interaction.dim_env())
    throw DimensionError("evolve_composite: state and interaction dimensions differ");
  if (t == 0.0) return initial;
  const auto u = exp_hermitian_scaled(interaction.hamiltonian(), complex(0.0, -t));
  return CompositeState(u * initial.amplitudes(), initial.dim_system(), initial.dim_env());
}

/// Matrix of <Phi_m(t)|Phi_n(t)> with Phi_n(t) = exp(-i B_n t) env_initial.
inline ComplexMatrix pointer_overlaps(const PointerInteraction& interaction,
                                      const StateVector& env_initial, double t) {
  if (env_initial.dim() != interaction.dim_env())
    throw DimensionError("pointer_overlaps: environment state dimension differs");
  const std::size_t ds = interaction.dim_system();
  std::vector<ComplexMatrix> phi;
  phi.reserve(ds);
  for (const auto& b : interaction.couplings())
    phi.push_back(exp_hermitian_scaled(b, complex(0.0, -t)) * env_initial.amplitudes());
  ComplexMatrix o(ds, ds);
  for (std::size_t m = 0; m < ds; ++m) {
    o(m, m) = 1.0;
    for (std::size_t n = m + 1; n < ds; ++n) {
      o(m, n) = inner_product(phi[m], phi[n]);
      o(n, m) = std::conj(o(m, n));
    }
  }
  return o;
}

/// Partial trace of |Psi><Psi| over the environment.
inline DensityMatrix reduced_density(const CompositeState& state) {
  const auto& a = state.amplitudes();
  auto rho = partial_trace_env(outer_product(a, a), state.dim_system(), state.dim_env());
  return DensityMatrix(0.5 * (rho + adjoint(rho)));
}

/// Reduced density predicted from the system amplitudes c_n and pointer overlaps:
/// <n|rho_S|m> = c*_m c_n <Phi_m|Phi_n>.
inline ComplexMatrix factorized_reduced_density(const StateVector& system,
                                                const ComplexMatrix& overlaps) {
  const std::size_t ds = system.dim();
  if (!overlaps.is_square() || overlaps.rows() != ds)
    throw DimensionError("factorized_reduced_density: overlap matrix dimension differs");
  ComplexMatrix rho(ds, ds);
  for (std::size_t m = 0; m < ds; ++m)
    for (std::size_t n = 0; n < ds; ++n)
      rho(n, m) = std::conj(system[m]) * system[n] * overlaps(m, n);
  return rho;
}

/// Per-event channel parameters. `basis` is the channel (pointer) basis.
struct ScatteringChannelParams {
  double epsilon = 0.0;
  std::uint64_t events = 0;
  BasisChange basis = BasisChange::identity(2);
  double recoil_strength = 0.0;  // radians per event
  std::uint64_t seed = 0;

  void validate(std::size_t dim) const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw PreconditionError("epsilon must lie in [0, 1]");
    if (!(recoil_strength >= 0.0) || !std::isfinite(recoil_strength))
      throw PreconditionError("recoil strength must be a finite nonnegative number");
    if (basis.dim() != dim)
      throw DimensionError("channel basis dimension " + std::to_string(basis.dim()) +
                           " differs from density dimension " + std::to_string(dim));
  }
};

namespace detail {
inline ComplexMatrix to_channel(const DensityMatrix& rho, const BasisChange& b) {
  return b.matrix() * rho.matrix() * adjoint(b.matrix());
}
inline DensityMatrix from_channel(const ComplexMatrix& m, const BasisChange& b) {
  return DensityMatrix(adjoint(b.matrix()) * m * b.matrix());
}
inline void scale_offdiagonal(ComplexMatrix& m, double factor) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c) m(r, c) *= factor;
}
}  // namespace detail

/// Hermitian kick G = (R + R^dagger)/2, R with real and imaginary parts uniform
/// in [-1, 1), drawn row-major (real part first) from `rng`.
inline ComplexMatrix random_hermitian_kick(std::size_t n, SplitMix64& rng) {
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = rng.uniform_pm1();
      const double im = rng.uniform_pm1();
      r(i, j) = complex(re, im);
    }
  return 0.5 * (r + adjoint(r));
}

/// No-recoil channel: N events each multiply the off-diagonal entries (in the
/// channel basis) by 1 - epsilon and leave the diagonal untouched.
inline DensityMatrix no_recoil_scatter(const DensityMatrix& rho, const ScatteringChannelParams& p) {
  p.validate(rho.dim());
  if (p.recoil_strength != 0.0)
    throw PreconditionError("no_recoil_scatter requires recoil_strength = 0");
  auto m = detail::to_channel(rho, p.basis);
  detail::scale_offdiagonal(m, std::pow(1.0 - p.epsilon, static_cast<double>(p.events)));
  return detail::from_channel(m, p.basis);
}

/// Observables of the channel after each event, measured in the channel basis.
struct DecayPoint {
  std::uint64_t event = 0;
  double offdiag_frobenius = 0.0;
  double diag_l1_drift = 0.0;  // sum_i |rho_ii(k) - rho_ii(0)|
};

namespace detail {
// Runs the channel in its own basis and reports the state after every event.
template <class Observer>
ComplexMatrix run_channel(const DensityMatrix& rho, const ScatteringChannelParams& p,
                          Observer&& observe) {
  p.validate(rho.dim());
  const auto start = to_channel(rho, p.basis);
  observe(std::uint64_t{0}, start);
  if (p.recoil_strength == 0.0) {
    ComplexMatrix m = start;
    for (std::uint64_t k = 1; k <= p.events; ++k) {
      m = start;
      scale_offdiagonal(m, std::pow(1.0 - p.epsilon, static_cast<double>(k)));
      observe(k, m);
    }
    return m;
  }
  SplitMix64 rng(p.seed);
  ComplexMatrix m = start;
  for (std::uint64_t k = 1; k <= p.events; ++k) {
    scale_offdiagonal(m, 1.0 - p.epsilon);
    const auto g = random_hermitian_kick(m.rows(), rng);
    const auto u = exp_hermitian_scaled(g, complex(0.0, -p.recoil_strength));
    m = u * m * adjoint(u);
    m = 0.5 * (m + adjoint(m));
    observe(k, m);
  }
  return m;
}
}  // namespace detail

/// Recoil contrast model: every event applies the 1 - epsilon off-diagonal factor
/// and then conjugates by exp(-i theta G) with a fresh Hermitian kick G drawn from
/// the seeded stream (theta = recoil_strength). With theta = 0 this is exactly
/// no_recoil_scatter.
inline DensityMatrix recoil_scatter(const DensityMatrix& rho, const ScatteringChannelParams& p) {
  if (p.recoil_strength == 0.0) return no_recoil_scatter(rho, p);
  const auto m = detail::run_channel(rho, p, [](std::uint64_t, const ComplexMatrix&) {});
  return detail::from_channel(m, p.basis);
}

/// Per-event decay curve, including the initial state as event 0.
inline std::vector<DecayPoint> decay_curve(const DensityMatrix& rho, const ScatteringChannelParams& p) {
  std::vector<DecayPoint> out;
  out.reserve(static_cast<std::size_t>(p.events) + 1);
  std::vector<double> diag0;
  detail::run_channel(rho, p, [&](std::uint64_t k, const ComplexMatrix& m) {
    if (k == 0)
      for (std::size_t i = 0; i < m.rows(); ++i) diag0.push_back(m(i, i).real());
    double drift = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) drift += std::abs(m(i, i).real() - diag0[i]);
    out.push_back({k, offdiagonal_norm(m), drift});
  });
  return out;
}

/// Runs recoil_scatter for seeds seed, seed + 1, ..., in that order.
inline std::vector<DensityMatrix> recoil_ensemble(const DensityMatrix& rho,
                                                  ScatteringChannelParams p, std::size_t members) {
  std::vector<DensityMatrix> out;
  out.reserve(members);
  const auto base = p.seed;
  for (std::size_t i = 0; i < members; ++i) {
    p.seed = base + i;
    out.push_back(recoil_scatter(rho, p));
  }
  return out;
}

}  // namespace qlab
