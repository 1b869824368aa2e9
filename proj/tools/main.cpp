// qlab_cli: runs the density-matrix, thermal and decoherence scenarios and
// writes their CSV / JSON artifacts.
//
// Precedence: built-in defaults < --config file < command-line flags.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using qlab::cli::ConfigError;
using qlab::cli::json;
using qlab::cli::ParamKind;

std::string flag_name(std::string key) {
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty())
    throw ConfigError("--" + key + ": '" + text + "' is not a number");
  return v;
}

std::int64_t parse_integer(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty())
    throw ConfigError("--" + key + ": '" + text + "' is not an integer");
  return v;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

const std::map<std::string, std::string> kDescriptions{
    {"planck", "Planck, Rayleigh-Jeans and Bose-Einstein curves over an omega grid (CSV)"},
    {"maxent", "maximum-entropy occupation of a discrete spectrum at fixed mean energy or T (JSON)"},
    {"decohere", "per-event off-diagonal decay under the scattering channel (CSV)"},
    {"basis-defect", "how far dephasing fails to commute with a change of basis (JSON)"},
    {"cat", "cat state in bases A and B, dephased, with measurement statistics (JSON)"},
    {"composite", "exact system-environment evolution, pointer overlaps, reduced density (JSON)"},
};

struct CommandFlags {
  CLI::App* app = nullptr;
  std::map<std::string, std::vector<std::string>> values;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix, thermal-radiation and decoherence scenarios"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string units_text = "natural";
  std::string out_path;
  std::string config_path;
  std::uint64_t seed = 0;
  auto* units_opt = app.add_option("--units", units_text, "natural | si")
                        ->check(CLI::IsMember({"natural", "si"}));
  auto* out_opt = app.add_option("--out", out_path, "write the primary artifact here (default stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomised scenarios");
  app.add_option("--config", config_path, "JSON file with parameters; flags take precedence")
      ->check(CLI::ExistingFile);

  std::map<std::string, CommandFlags> commands;
  for (const auto& name : qlab::cli::command_names()) {
    auto& cmd = commands[name];
    cmd.app = app.add_subcommand(name, kDescriptions.at(name));
    for (const auto& param : qlab::cli::command_params(name)) {
      auto* opt = cmd.app->add_option(flag_name(param.key), cmd.values[param.key], param.help);
      if (param.kind == ParamKind::real_list)
        opt->delimiter(',')->expected(1, CLI::detail::expected_max_vector_size);
      else
        opt->expected(1);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::string command;
    for (const auto& [name, cmd] : commands)
      if (cmd.app->parsed()) command = name;

    json params = json::object();
    qlab::cli::GlobalOptions global;
    std::string units = "natural";
    std::string out;
    if (!config_path.empty()) {
      const json file = qlab::io::read_json_file(config_path);
      if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (key == "command") {
          if (!value.is_string() || value.get<std::string>() != command)
            throw ConfigError("config file is for command '" + value.dump() + "', not " + command);
        } else if (key == "units") {
          if (!value.is_string()) throw ConfigError("config units must be a string");
          units = value.get<std::string>();
        } else if (key == "out") {
          if (!value.is_string()) throw ConfigError("config out must be a string");
          out = value.get<std::string>();
        } else if (key == "seed") {
          if (!value.is_number_unsigned()) throw ConfigError("config seed must be an unsigned integer");
          global.seed = value.get<std::uint64_t>();
        } else {
          params[key] = value;
        }
      }
    }
    if (units_opt->count()) units = units_text;
    if (out_opt->count()) out = out_path;
    if (seed_opt->count()) global.seed = seed;
    if (units != "natural" && units != "si") throw ConfigError("units must be natural or si");
    global.units = units == "si" ? qlab::UnitSystem::si : qlab::UnitSystem::natural;

    for (const auto& param : qlab::cli::command_params(command)) {
      const auto* opt = commands[command].app->get_option(flag_name(param.key));
      if (!opt->count()) continue;
      const auto& raw = commands[command].values[param.key];
      switch (param.kind) {
        case ParamKind::real: params[param.key] = parse_real(param.key, raw.back()); break;
        case ParamKind::integer: params[param.key] = parse_integer(param.key, raw.back()); break;
        case ParamKind::text: params[param.key] = raw.back(); break;
        case ParamKind::real_list: {
          json list = json::array();
          for (const auto& s : raw)
            if (!s.empty()) list.push_back(parse_real(param.key, s));
          params[param.key] = std::move(list);
          break;
        }
      }
    }

    const auto result = qlab::cli::run_command(command, params, global);
    for (const auto& [path, contents] : result.files) write_file(path, contents);
    if (out.empty()) {
      std::cout << result.primary;
      std::cerr << result.summary;
    } else {
      write_file(out, result.primary);
      std::cout << result.summary;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qlab::cli::exit_code_for(e);
  }
}
