#pragma once

// Scenario commands behind qlab_cli. Each command takes the merged parameter
// object (config file overlaid by flags) and returns its artifacts in memory;
// main() decides where they go.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlab/decoherence.hpp"
#include "qlab/density.hpp"
#include "qlab/io.hpp"
#include "qlab/thermal.hpp"

namespace qlab::cli {

using json = nlohmann::json;

/// Invalid configuration: exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

enum class ParamKind { real, integer, text, real_list };

struct ParamSpec {
  std::string key;
  ParamKind kind;
  std::string help;
};

struct GlobalOptions {
  UnitSystem units = UnitSystem::natural;
  std::uint64_t seed = 0;
};

struct Outputs {
  std::string primary;                         // --out, or stdout
  std::map<std::string, std::string> files;    // path -> contents
  std::string summary;                         // human-readable report
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"planck", "maxent",   "decohere",
                                              "basis-defect", "cat", "composite"};
  return names;
}

inline const std::vector<ParamSpec>& command_params(const std::string& command) {
  static const std::map<std::string, std::vector<ParamSpec>> table{
      {"planck",
       {{"T", ParamKind::real, "temperature (K, or natural units)"},
        {"omega", ParamKind::real_list, "explicit angular-frequency grid"},
        {"omega_min", ParamKind::real, "grid start (default 0.1 k_B T / hbar)"},
        {"omega_max", ParamKind::real, "grid end (default 10 k_B T / hbar)"},
        {"points", ParamKind::integer, "grid size (default 100)"}}},
      {"maxent",
       {{"omega", ParamKind::real, "ladder spacing, e_n = n hbar omega (default 1)"},
        {"levels", ParamKind::integer, "ladder length (default: truncation rule)"},
        {"energies", ParamKind::real_list, "explicit finite spectrum instead of a ladder"},
        {"T", ParamKind::real, "temperature: report the analytic Gibbs occupancy"},
        {"energy", ParamKind::real, "target mean energy: solve for beta"}}},
      {"decohere",
       {{"epsilon", ParamKind::real, "per-event off-diagonal suppression (default 0.1)"},
        {"events", ParamKind::integer, "number of scattering events (default 10)"},
        {"recoil", ParamKind::real, "recoil kick strength in radians (default 0)"},
        {"state", ParamKind::text, "cat | mixed | zero (default cat)"},
        {"rho_file", ParamKind::text, "density JSON file instead of a preset"},
        {"basis", ParamKind::text, "channel basis: identity | hadamard (default identity)"},
        {"basis_file", ParamKind::text, "channel basis JSON file instead of a preset"}}},
      {"basis-defect",
       {{"state", ParamKind::text, "cat | mixed | zero (default cat)"},
        {"rho_file", ParamKind::text, "density JSON file instead of a preset"},
        {"basis", ParamKind::text, "identity | hadamard (default hadamard)"},
        {"basis_file", ParamKind::text, "basis-change JSON file instead of a preset"}}},
      {"cat", {}},
      {"composite",
       {{"preset", ParamKind::text, "sigma-x | random (default sigma-x)"},
        {"g", ParamKind::real, "coupling strength (default 1)"},
        {"gt", ParamKind::real_list, "explicit g t samples"},
        {"gt_min", ParamKind::real, "first g t sample (default 0)"},
        {"gt_max", ParamKind::real, "last g t sample (default pi/2)"},
        {"samples", ParamKind::integer, "number of g t samples (default 9)"},
        {"dim_system", ParamKind::integer, "random preset: system dimension (default 2)"},
        {"dim_env", ParamKind::integer, "random preset: environment dimension (default 2)"},
        {"overlaps_csv", ParamKind::text, "also write overlaps vs t as CSV to this path"}}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

/// Typed, validated access to a command's parameter object. Unknown keys and
/// wrongly typed values are rejected up front.
class Params {
public:
  Params(const json& params, const std::string& command) : p_(params) {
    if (!p_.is_object()) throw ConfigError("parameters must be a JSON object");
    const auto& specs = command_params(command);
    for (const auto& [key, value] : p_.items()) {
      const ParamSpec* spec = nullptr;
      for (const auto& s : specs)
        if (s.key == key) spec = &s;
      if (!spec) throw ConfigError("unknown key '" + key + "' for command " + command);
      check_type(*spec, value);
    }
  }

  bool has(const std::string& key) const { return p_.contains(key); }

  double real(const std::string& key, double fallback) const {
    return has(key) ? p_.at(key).get<double>() : fallback;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? p_.at(key).get<std::int64_t>() : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? p_.at(key).get<std::string>() : fallback;
  }
  std::vector<double> real_list(const std::string& key) const {
    return has(key) ? p_.at(key).get<std::vector<double>>() : std::vector<double>{};
  }

private:
  static void check_type(const ParamSpec& s, const json& v) {
    bool ok = false;
    switch (s.kind) {
      case ParamKind::real: ok = v.is_number() && std::isfinite(v.get<double>()); break;
      case ParamKind::integer: ok = v.is_number_integer(); break;
      case ParamKind::text: ok = v.is_string(); break;
      case ParamKind::real_list:
        ok = v.is_array();
        if (ok)
          for (const auto& x : v) ok = ok && x.is_number() && std::isfinite(x.get<double>());
        break;
    }
    if (!ok) throw ConfigError("parameter '" + s.key + "' has the wrong type");
  }

  json p_;
};

namespace detail {

inline std::string csv_line(const std::vector<double>& xs) {
  std::string line;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) line += ',';
    line += io::format17(xs[i]);
  }
  return line + '\n';
}

inline std::string dump(const json& j) { return j.dump(2) + '\n'; }

/// Probabilities about to be written must form a distribution.
inline void check_probabilities(const std::vector<double>& p) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12)) throw NumericalFailure("emitted probability is negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw NumericalFailure("emitted probabilities do not sum to 1");
}

inline DensityMatrix preset_density(const std::string& name) {
  if (name == "cat") return cat_density();
  if (name == "mixed") return DensityMatrix::maximally_mixed(2).with_label("mixed");
  if (name == "zero")
    return pure_state_density(StateVector(ComplexMatrix::basis_vector(2, 0))).with_label("zero");
  throw ConfigError("unknown state preset '" + name + "' (cat | mixed | zero)");
}

inline BasisChange preset_basis(const std::string& name, std::size_t dim) {
  if (name == "identity") return BasisChange::identity(dim);
  if (name == "hadamard") {
    if (dim != 2) throw ConfigError("the hadamard preset needs a 2-dimensional state");
    return BasisChange::hadamard();
  }
  throw ConfigError("unknown basis preset '" + name + "' (identity | hadamard)");
}

inline DensityMatrix load_density(const Params& p) {
  if (p.has("rho_file")) {
    if (p.has("state")) throw ConfigError("give either state or rho_file, not both");
    return io::density_from_json(io::read_json_file(p.text("rho_file", "")));
  }
  return preset_density(p.text("state", "cat"));
}

inline BasisChange load_basis(const Params& p, std::size_t dim, const std::string& fallback) {
  if (p.has("basis_file")) {
    if (p.has("basis")) throw ConfigError("give either basis or basis_file, not both");
    return io::basis_from_json(io::read_json_file(p.text("basis_file", "")));
  }
  return preset_basis(p.text("basis", fallback), dim);
}

inline std::vector<double> linear_grid(double lo, double hi, std::int64_t points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (!(hi >= lo)) throw ConfigError("grid end lies below grid start");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] =
        points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

inline json probabilities_json(const std::vector<double>& p) {
  check_probabilities(p);
  return p;
}

}  // namespace detail

inline Outputs run_planck(const json& params, const GlobalOptions& g) {
  const Params p(params, "planck");
  const auto k = PhysicalConstants::of(g.units);
  const double T = p.real("T", 1.0);
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  std::vector<double> grid;
  if (p.has("omega")) {
    if (p.has("omega_min") || p.has("omega_max") || p.has("points"))
      throw ConfigError("give either omega or omega_min/omega_max/points");
    grid = p.real_list("omega");
  } else {
    const double scale = k.k_B * T / k.hbar;
    grid = detail::linear_grid(p.real("omega_min", 0.1 * scale), p.real("omega_max", 10.0 * scale),
                               p.integer("points", 100));
  }
  if (grid.empty()) throw ConfigError("omega grid is empty");
  for (double w : grid)
    if (!(w > 0.0)) throw ConfigError("omega grid values must be positive");

  Outputs out;
  out.primary = "omega,T,planck,rayleigh_jeans,bose_einstein,mode_density\n";
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const double planck = planck_density(w, T, k);
    if (planck > best_value) best_value = planck, best = i;
    out.primary += detail::csv_line({w, T, planck, rayleigh_jeans_density(w, T, k),
                                     bose_einstein(w, T, k), mode_density(w, k)});
  }
  const double peak = peak_frequency(T, k);
  std::ostringstream s;
  s << "planck: " << grid.size() << " rows at T = " << io::format17(T) << "\n"
    << "  largest row: omega = " << io::format17(grid[best])
    << " (omega/2pi = " << io::format17(grid[best] / (2 * std::numbers::pi)) << ")\n"
    << "  analytic peak: omega* = " << io::format17(peak)
    << " (omega*/2pi = " << io::format17(peak / (2 * std::numbers::pi)) << ")\n";
  out.summary = s.str();
  return out;
}

inline Outputs run_maxent(const json& params, const GlobalOptions& g) {
  const Params p(params, "maxent");
  const auto k = PhysicalConstants::of(g.units);
  if (p.has("T") == p.has("energy")) throw ConfigError("give exactly one of T or energy");
  const double omega = p.real("omega", 1.0);
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");

  std::optional<DiscreteSpectrum> spectrum;
  if (p.has("energies")) {
    if (p.has("levels") || p.has("omega")) throw ConfigError("energies excludes omega and levels");
    spectrum = DiscreteSpectrum::finite(p.real_list("energies"));
  } else {
    std::int64_t levels = p.integer("levels", 0);
    if (levels < 0) throw ConfigError("levels must be positive");
    if (levels == 0) {
      double x = 0.0;
      if (p.has("T")) {
        const double T = p.real("T", 0.0);
        if (!(T > 0.0)) throw ConfigError("T must be positive");
        x = k.hbar * omega / (k.k_B * T);
      } else {
        const double e = p.real("energy", 0.0);
        if (!(e > 0.0)) throw InfeasibleError("target energy must be positive on a ladder");
        x = std::log1p(k.hbar * omega / e);
      }
      levels = static_cast<std::int64_t>(required_ladder_levels(x));
    }
    spectrum = DiscreteSpectrum::ladder(omega, static_cast<std::size_t>(levels), k);
  }

  const auto d = p.has("T") ? gibbs_occupancy(*spectrum, p.real("T", 0.0), k)
                            : maxent_solve(*spectrum, p.real("energy", 0.0));

  // Gap to the closed-form Gibbs weights: the infinite geometric law on ladders,
  // directly normalised Boltzmann weights otherwise.
  double gap = 0.0;
  const auto& e = spectrum->energies();
  if (spectrum->is_ladder()) {
    const double x = d.beta * spectrum->quantum();
    for (std::size_t n = 0; n < e.size(); ++n)
      gap = std::max(gap, std::abs(d.probabilities[n] -
                                   -std::expm1(-x) * std::exp(-x * static_cast<double>(n))));
  } else {
    double z = 0.0;
    for (double en : e) z += std::exp(-d.beta * (en - e.front()));
    for (std::size_t n = 0; n < e.size(); ++n)
      gap = std::max(gap, std::abs(d.probabilities[n] - std::exp(-d.beta * (e[n] - e.front())) / z));
  }

  json report{{"spectrum",
               {{"kind", spectrum->is_ladder() ? "ladder" : "finite"},
                {"levels", spectrum->levels()},
                {"energies", e}}},
              {"mode", p.has("T") ? "temperature" : "target_energy"},
              {"beta", d.beta},
              {"temperature", d.beta > 0.0 ? json(1.0 / (k.k_B * d.beta)) : json(nullptr)},
              {"probabilities", detail::probabilities_json(d.probabilities)},
              {"mean_occupancy", d.mean_occupancy},
              {"mean_energy", d.mean_energy},
              {"entropy", d.entropy()},
              {"gibbs_gap", gap}};
  if (spectrum->is_ladder()) {
    report["spectrum"]["omega"] = omega;
    report["bose_einstein_occupancy"] = 1.0 / std::expm1(d.beta * spectrum->quantum());
  }
  if (p.has("energy")) report["target_energy"] = p.real("energy", 0.0);

  Outputs out;
  out.primary = detail::dump(report);
  std::ostringstream s;
  s << "maxent: " << spectrum->levels() << " levels, beta = " << io::format17(d.beta)
    << ", mean occupancy = " << io::format17(d.mean_occupancy)
    << ", entropy = " << io::format17(d.entropy()) << ", gap to Gibbs = " << io::format17(gap)
    << "\n";
  out.summary = s.str();
  return out;
}

inline Outputs run_decohere(const json& params, const GlobalOptions& g) {
  const Params p(params, "decohere");
  const auto rho = detail::load_density(p);
  const double eps = p.real("epsilon", 0.1);
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  const auto events = p.integer("events", 10);
  if (events < 0) throw ConfigError("events must be nonnegative");
  const double recoil = p.real("recoil", 0.0);
  if (!(recoil >= 0.0)) throw ConfigError("recoil must be nonnegative");
  ScatteringChannelParams channel{eps, static_cast<std::uint64_t>(events),
                                  detail::load_basis(p, rho.dim(), "identity"), recoil, g.seed};

  const auto rows = decay_curve(rho, channel);
  const auto final_state = recoil_scatter(rho, channel);  // validates the end state

  Outputs out;
  out.primary = "event,offdiag_frobenius,diag_l1_drift\n";
  double max_drift = 0.0;
  for (const auto& r : rows) {
    max_drift = std::max(max_drift, r.diag_l1_drift);
    out.primary += std::to_string(r.event) + ',' + io::format17(r.offdiag_frobenius) + ',' +
                   io::format17(r.diag_l1_drift) + '\n';
  }
  std::ostringstream s;
  const double initial = rows.front().offdiag_frobenius;
  s << "decohere: " << events << " events, epsilon = " << io::format17(eps)
    << ", recoil = " << io::format17(recoil) << ", seed = " << g.seed << "\n"
    << "  off-diagonal ratio final/initial = "
    << (initial > 0.0 ? io::format17(rows.back().offdiag_frobenius / initial) : std::string("n/a"))
    << "\n  max diagonal drift = " << io::format17(max_drift)
    << "\n  final trace = " << io::format17(trace(final_state.matrix()).real()) << "\n";
  out.summary = s.str();
  return out;
}

inline Outputs run_basis_defect(const json& params, const GlobalOptions&) {
  const Params p(params, "basis-defect");
  const auto rho = detail::load_density(p);
  const auto c = detail::load_basis(p, rho.dim(), "hadamard");
  if (c.dim() != rho.dim()) throw ConfigError("state and basis dimensions differ");
  const double defect = dephasing_commutator_defect(rho, c);
  const auto identity = BasisChange::identity(rho.dim());
  json report{{"rho", io::to_json(rho)},
              {"basis", io::to_json(c)},
              {"dephased", io::to_json(dephase(rho, identity))},
              {"conjugated_dephased", io::to_json(dephase(rho, c))},
              {"defect", defect}};
  Outputs out;
  out.primary = detail::dump(report);
  out.summary = "basis-defect: ||D(rho) - C^-1 D(C rho C^-1) C||_F = " + io::format17(defect) + "\n";
  return out;
}

inline Outputs run_cat(const json& params, const GlobalOptions&) {
  const Params p(params, "cat");
  const auto rho = cat_density();
  const auto a = BasisChange::identity(2);
  const auto b = BasisChange::hadamard();
  const auto in_b = change_basis(rho, b).with_label("B");
  const auto dephased_a = dephase(rho, a).with_label("A");
  const auto pa = measurement_probabilities(rho, a);
  const auto pb = measurement_probabilities(rho, b);
  json report{{"state", "(|alive> + |dead>)/sqrt(2)"},
              {"rho_basis_a", io::to_json(rho)},
              {"rho_basis_b", io::to_json(in_b)},
              {"probabilities_basis_a", detail::probabilities_json(pa)},
              {"probabilities_basis_b", detail::probabilities_json(pb)},
              {"dephased_basis_a", io::to_json(dephased_a)},
              {"entropy_dephased_basis_a", von_neumann_entropy(dephased_a)},
              {"purity", purity(rho)},
              {"defect_hadamard", dephasing_commutator_defect(rho, b)}};
  Outputs out;
  out.primary = detail::dump(report);
  std::ostringstream s;
  s << "cat: basis A probabilities (" << io::format17(pa[0]) << ", " << io::format17(pa[1]) << ")\n"
    << "     basis B probabilities (" << io::format17(pb[0]) << ", " << io::format17(pb[1]) << ")\n";
  out.summary = s.str();
  return out;
}

inline Outputs run_composite(const json& params, const GlobalOptions& g) {
  const Params p(params, "composite");
  const std::string preset = p.text("preset", "sigma-x");
  const double coupling = p.real("g", 1.0);
  if (!(coupling > 0.0)) throw ConfigError("g must be positive");

  std::vector<double> gts;
  if (p.has("gt")) {
    if (p.has("gt_min") || p.has("gt_max") || p.has("samples"))
      throw ConfigError("give either gt or gt_min/gt_max/samples");
    gts = p.real_list("gt");
  } else {
    gts = detail::linear_grid(p.real("gt_min", 0.0), p.real("gt_max", std::numbers::pi / 2),
                              p.integer("samples", 9));
  }
  if (gts.empty()) throw ConfigError("g t grid is empty");

  std::optional<PointerInteraction> interaction;
  std::optional<StateVector> system;
  std::optional<StateVector> env;
  if (preset == "sigma-x") {
    if (p.has("dim_system") || p.has("dim_env"))
      throw ConfigError("the sigma-x preset has fixed dimensions 2 x 2");
    interaction = PointerInteraction::sigma_x_coupling(coupling);
    system = cat_state();
    env = StateVector(ComplexMatrix::basis_vector(2, 0));
  } else if (preset == "random") {
    const auto ds = p.integer("dim_system", 2);
    const auto de = p.integer("dim_env", 2);
    if (ds < 1 || de < 1) throw ConfigError("dimensions must be positive");
    if (de > static_cast<std::int64_t>(kMaxEnvDim) ||
        ds * de > static_cast<std::int64_t>(kMaxCompositeDim))
      throw ConfigError("dimension limit exceeded (env <= " + std::to_string(kMaxEnvDim) +
                        ", system x env <= " + std::to_string(kMaxCompositeDim) + ")");
    SplitMix64 rng(g.seed);
    std::vector<ComplexMatrix> b;
    for (std::int64_t n = 0; n < ds; ++n)
      b.push_back(complex(coupling) * random_hermitian_kick(static_cast<std::size_t>(de), rng));
    interaction = PointerInteraction(std::move(b));
    auto random_state = [&](std::int64_t dim) {
      std::vector<complex> v(static_cast<std::size_t>(dim));
      for (auto& z : v) {
        const double re = rng.uniform_pm1();
        z = complex(re, rng.uniform_pm1());
      }
      return StateVector::normalized(std::move(v));
    };
    system = random_state(ds);
    env = random_state(de);
  } else {
    throw ConfigError("unknown composite preset '" + preset + "' (sigma-x | random)");
  }

  const auto initial = CompositeState::product(*system, *env);
  json samples = json::array();
  std::string csv = "t,gt,m,n,overlap_re,overlap_im,overlap_abs\n";
  double worst = 0.0;
  for (double gt : gts) {
    const double t = gt / coupling;
    const auto state = evolve_composite(initial, *interaction, t);
    const auto rho = reduced_density(state);
    const auto overlaps = pointer_overlaps(*interaction, *env, t);
    const double residual =
        frobenius_norm(rho.matrix() - factorized_reduced_density(*system, overlaps));
    worst = std::max(worst, residual);
    json o_re = json::array(), o_im = json::array();
    for (std::size_t m = 0; m < overlaps.rows(); ++m) {
      json rr = json::array(), ri = json::array();
      for (std::size_t n = 0; n < overlaps.cols(); ++n) {
        rr.push_back(overlaps(m, n).real());
        ri.push_back(overlaps(m, n).imag());
        csv += io::format17(t) + ',' + io::format17(gt) + ',' + std::to_string(m) + ',' +
               std::to_string(n) + ',' +
               detail::csv_line({overlaps(m, n).real(), overlaps(m, n).imag(), std::abs(overlaps(m, n))});
      }
      o_re.push_back(std::move(rr));
      o_im.push_back(std::move(ri));
    }
    samples.push_back({{"t", t},
                       {"gt", gt},
                       {"overlaps", {{"re", std::move(o_re)}, {"im", std::move(o_im)}}},
                       {"reduced_density", io::to_json(rho)},
                       {"composite_purity", state.purity()},
                       {"reduced_purity", purity(rho)},
                       {"factorization_residual", residual}});
  }
  if (!(worst < 1e-10))
    throw NumericalFailure("factorization residual " + io::format17(worst) + " exceeds 1e-10");

  json report{{"preset", preset},
               {"g", coupling},
               {"dim_system", interaction->dim_system()},
               {"dim_env", interaction->dim_env()},
               {"samples", std::move(samples)},
               {"max_factorization_residual", worst}};
  Outputs out;
  out.primary = detail::dump(report);
  if (p.has("overlaps_csv")) out.files[p.text("overlaps_csv", "")] = csv;
  std::ostringstream s;
  s << "composite: " << gts.size() << " samples, preset " << preset
    << ", max factorization residual = " << io::format17(worst) << "\n";
  out.summary = s.str();
  return out;
}

inline Outputs run_command(const std::string& command, const json& params, const GlobalOptions& g) {
  if (command == "planck") return run_planck(params, g);
  if (command == "maxent") return run_maxent(params, g);
  if (command == "decohere") return run_decohere(params, g);
  if (command == "basis-defect") return run_basis_defect(params, g);
  if (command == "cat") return run_cat(params, g);
  if (command == "composite") return run_composite(params, g);
  throw ConfigError("unknown command '" + command + "'");
}

/// 0 success, 2 invalid configuration, 3 numerical failure.
/// Anything that is not a library error is treated as a failed computation.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalFailure*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 3;
}

}  // namespace qlab::cli
