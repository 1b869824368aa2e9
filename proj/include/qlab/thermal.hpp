#pragma once

// Entropy maximisation on discrete spectra, Bose-Einstein occupancy and the
// Planck / Rayleigh-Jeans spectral energy densities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/error.hpp"

namespace qlab {

enum class UnitSystem { natural, si };

/// hbar, k_B and c. Natural units set all three to 1; SI uses the exact 2019
/// CODATA values for hbar, k_B and c.
struct PhysicalConstants {
  double hbar = 1.0;  // J s
  double k_B = 1.0;   // J / K
  double c = 1.0;     // m / s
  UnitSystem mode = UnitSystem::natural;

  static constexpr PhysicalConstants natural() { return {}; }
  static constexpr PhysicalConstants si() {
    return {1.054571817e-34, 1.380649e-23, 2.99792458e8, UnitSystem::si};
  }
  static constexpr PhysicalConstants of(UnitSystem u) { return u == UnitSystem::si ? si() : natural(); }
};

/// Strictly increasing energy levels. A ladder spectrum is the truncation
/// e_n = n hbar omega, n = 0..N-1, of the harmonic oscillator.
class DiscreteSpectrum {
public:
  static DiscreteSpectrum ladder(double omega, std::size_t levels,
                                 const PhysicalConstants& k = PhysicalConstants::natural()) {
    if (!(omega > 0.0)) throw PreconditionError("ladder spectrum needs omega > 0");
    std::vector<double> e(levels);
    for (std::size_t n = 0; n < levels; ++n) e[n] = static_cast<double>(n) * k.hbar * omega;
    DiscreteSpectrum s(std::move(e));
    s.omega_ = omega;
    s.quantum_ = k.hbar * omega;
    return s;
  }

  static DiscreteSpectrum finite(std::vector<double> energies) {
    return DiscreteSpectrum(std::move(energies));
  }

  const std::vector<double>& energies() const noexcept { return energies_; }
  std::size_t levels() const noexcept { return energies_.size(); }
  bool is_ladder() const noexcept { return omega_ > 0.0; }
  double omega() const noexcept { return omega_; }
  /// hbar omega for ladders, 0 otherwise.
  double quantum() const noexcept { return quantum_; }
  double min_energy() const { return energies_.front(); }
  double max_energy() const { return energies_.back(); }

private:
  explicit DiscreteSpectrum(std::vector<double> e) : energies_(std::move(e)) {
    if (energies_.size() < 2) throw PreconditionError("spectrum needs at least two levels");
    for (std::size_t n = 0; n < energies_.size(); ++n) {
      if (!std::isfinite(energies_[n])) throw PreconditionError("spectrum energies must be finite");
      if (n > 0 && !(energies_[n] > energies_[n - 1]))
        throw PreconditionError("spectrum energies must be strictly increasing");
    }
  }

  std::vector<double> energies_;
  double omega_ = 0.0;
  double quantum_ = 0.0;
};

/// Level probabilities at inverse temperature beta (may be zero or negative for
/// finite spectra).
struct OccupancyDistribution {
  std::vector<double> probabilities;
  double beta = 0.0;            // 1 / J
  double mean_occupancy = 0.0;  // sum n p_n
  double mean_energy = 0.0;     // sum e_n p_n

  double entropy() const { return shannon_entropy(probabilities); }
};

inline constexpr double kTruncationRuleTail = 1e-12;
inline constexpr double kTruncationErrorTail = 1e-9;
inline constexpr std::size_t kMaxLadderLevels = 10000;

/// Unnormalised Boltzmann weight dropped by cutting the ladder after `levels`
/// states: e^{-x N} / (1 - e^{-x}) with x = hbar omega / kT.
inline double ladder_tail_weight(double x, std::size_t levels) {
  return std::exp(-x * static_cast<double>(levels)) / -std::expm1(-x);
}

/// Smallest ladder length with tail weight below 1e-12, without the level cap.
inline std::size_t ladder_levels_needed(double x) {
  if (!(x > 0.0)) throw PreconditionError("ladder truncation needs hbar omega / kT > 0");
  // e^{-xN} < tol (1 - e^{-x})
  const double bound = (std::log(1.0 / kTruncationRuleTail) - std::log(-std::expm1(-x))) / x;
  if (!(bound < 1e15)) throw PreconditionError("ladder truncation: hbar omega / kT is too small");
  auto levels = static_cast<std::size_t>(std::max(2.0, std::floor(bound) + 1.0));
  while (levels > 2 && ladder_tail_weight(x, levels - 1) < kTruncationRuleTail) --levels;
  while (ladder_tail_weight(x, levels) >= kTruncationRuleTail) ++levels;
  return levels;
}

/// Truncation rule: tail weight below 1e-12, at most 10^4 levels.
inline std::size_t required_ladder_levels(double x) {
  const auto levels = ladder_levels_needed(x);
  if (levels > kMaxLadderLevels)
    throw TruncationError("ladder truncation needs " + std::to_string(levels) + " levels, cap is " +
                              std::to_string(kMaxLadderLevels),
                          levels);
  return levels;
}

/// Ladder spectrum sized by the truncation rule for temperature T.
inline DiscreteSpectrum ladder_for_temperature(double omega, double T, const PhysicalConstants& k) {
  if (!(T > 0.0)) throw PreconditionError("temperature must be positive");
  const double x = k.hbar * omega / (k.k_B * T);
  return DiscreteSpectrum::ladder(omega, required_ladder_levels(x), k);
}

/// Boltzmann distribution p_n ~ e^{-beta e_n} over the listed levels.
inline OccupancyDistribution boltzmann_distribution(const DiscreteSpectrum& s, double beta) {
  const auto& e = s.energies();
  // Reference energy keeps every exponent <= 0.
  const double ref = beta >= 0.0 ? s.min_energy() : s.max_energy();
  std::vector<double> w(e.size());
  double z = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) z += (w[n] = std::exp(-beta * (e[n] - ref)));
  OccupancyDistribution out{std::move(w), beta, 0.0, 0.0};
  for (std::size_t n = 0; n < e.size(); ++n) {
    out.probabilities[n] /= z;
    out.mean_occupancy += static_cast<double>(n) * out.probabilities[n];
    out.mean_energy += e[n] * out.probabilities[n];
  }
  return out;
}

/// Analytic entropy maximiser at temperature T. Ladder spectra are rejected when
/// the truncated tail weight exceeds 1e-9; the error carries the level count the
/// 1e-12 rule would need.
inline OccupancyDistribution gibbs_occupancy(const DiscreteSpectrum& s, double T,
                                             const PhysicalConstants& k = PhysicalConstants::natural()) {
  if (!(T > 0.0)) throw PreconditionError("gibbs_occupancy: temperature must be positive");
  const double beta = 1.0 / (k.k_B * T);
  if (s.is_ladder()) {
    const double x = beta * s.quantum();
    const double tail = ladder_tail_weight(x, s.levels());
    if (tail > kTruncationErrorTail) {
      const auto needed = ladder_levels_needed(x);
      throw TruncationError("ladder of " + std::to_string(s.levels()) + " levels drops tail weight " +
                                std::to_string(tail) + "; need " + std::to_string(needed),
                            needed);
    }
  }
  return boltzmann_distribution(s, beta);
}

inline constexpr int kMaxentBracketDoublings = 200;
inline constexpr int kMaxentBisectionCap = 200;
inline constexpr double kMaxentEnergyTolerance = 1e-10;

/// Maximises -sum p ln p subject to sum p = 1 and sum p e = E.
///
/// The stationary point is the Boltzmann form, so this reduces to finding the
/// Lagrange multiplier beta with <e>_beta = E. The mean energy is strictly
/// decreasing in beta, so the root is bracketed by doubling out from 1/|E - e_ref|
/// and then bisected.
inline OccupancyDistribution maxent_solve(const DiscreteSpectrum& s, double target_energy) {
  if (!std::isfinite(target_energy) || !(target_energy > s.min_energy()) ||
      !(target_energy < s.max_energy()))
    throw InfeasibleError("target mean energy " + std::to_string(target_energy) +
                          " is outside the open range (" + std::to_string(s.min_energy()) + ", " +
                          std::to_string(s.max_energy()) + ")");

  auto mean_at = [&](double beta) { return boltzmann_distribution(s, beta).mean_energy; };
  const double uniform = mean_at(0.0);
  if (target_energy == uniform) return boltzmann_distribution(s, 0.0);

  // Bracket [lo, hi] with mean(lo) > E > mean(hi).
  double lo = 0.0;
  double hi = 0.0;
  if (target_energy < uniform) {
    hi = 1.0 / (target_energy - s.min_energy());
    int k = 0;
    for (; mean_at(hi) > target_energy; ++k) {
      if (k >= kMaxentBracketDoublings) throw NumericalFailure("maxent_solve: bracket expansion failed");
      lo = hi;
      hi *= 2.0;
    }
  } else {
    lo = -1.0 / (s.max_energy() - target_energy);
    int k = 0;
    for (; mean_at(lo) < target_energy; ++k) {
      if (k >= kMaxentBracketDoublings) throw NumericalFailure("maxent_solve: bracket expansion failed");
      hi = lo;
      lo *= 2.0;
    }
  }

  for (int it = 0; it < kMaxentBisectionCap; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) break;
    const double m = mean_at(mid);
    if (m == target_energy) {
      lo = hi = mid;
      break;
    }
    (m > target_energy ? lo : hi) = mid;
  }

  auto best = boltzmann_distribution(s, lo);
  if (hi != lo) {
    auto other = boltzmann_distribution(s, hi);
    if (std::abs(other.mean_energy - target_energy) < std::abs(best.mean_energy - target_energy))
      best = std::move(other);
  }
  if (std::abs(best.mean_energy - target_energy) > kMaxentEnergyTolerance * std::abs(target_energy))
    throw NumericalFailure("maxent_solve: energy constraint not met after bisection");
  return best;
}

/// f = 1 / (e^{hbar omega / kT} - 1)
inline double bose_einstein(double omega, double T, const PhysicalConstants& k) {
  if (!(omega > 0.0) || !(T > 0.0)) throw PreconditionError("bose_einstein needs omega, T > 0");
  return 1.0 / std::expm1(k.hbar * omega / (k.k_B * T));
}

/// omega^2 / (pi^2 c^3)
inline double mode_density(double omega, const PhysicalConstants& k) {
  if (!(omega > 0.0)) throw PreconditionError("mode_density needs omega > 0");
  return omega * omega / (std::numbers::pi * std::numbers::pi * k.c * k.c * k.c);
}

/// Planck spectral energy density: mode density x photon energy x occupancy.
inline double planck_density(double omega, double T, const PhysicalConstants& k) {
  return mode_density(omega, k) * (k.hbar * omega) * bose_einstein(omega, T, k);
}

/// Classical limit omega^2 k_B T / (pi^2 c^3).
inline double rayleigh_jeans_density(double omega, double T, const PhysicalConstants& k) {
  if (!(T > 0.0)) throw PreconditionError("rayleigh_jeans_density needs T > 0");
  return mode_density(omega, k) * (k.k_B * T);
}

/// Root x* of x = 3 (1 - e^{-x}), the maximiser of x^3 / (e^x - 1).
inline double planck_peak_x() {
  double lo = 1.0;
  double hi = 5.0;
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) break;
    (-3.0 * std::expm1(-mid) - mid > 0.0 ? lo : hi) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

/// Angular frequency maximising planck_density at temperature T.
inline double peak_frequency(double T, const PhysicalConstants& k) {
  if (!(T > 0.0)) throw PreconditionError("peak_frequency needs T > 0");
  static const double x_star = planck_peak_x();
  return x_star * k.k_B * T / k.hbar;
}

}  // namespace qlab
