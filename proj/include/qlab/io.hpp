#pragma once

// JSON and CSV encodings. Square complex matrices travel as
// {"dim": n, "re": [[...]], "im": [[...]]}; readers re-validate on load.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qlab/density.hpp"
#include "qlab/error.hpp"

namespace qlab::io {

using json = nlohmann::json;

/// printf("%.17g"), enough digits for a lossless double round trip.
inline std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json matrix_to_json(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("only square matrices serialise to {dim, re, im}");
  json re = json::array();
  json im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
    throw PreconditionError("matrix JSON needs keys dim, re (and optionally im)");
  for (const auto& [key, _] : j.items())
    if (key != "dim" && key != "re" && key != "im" && key != "label")
      throw PreconditionError("unknown matrix JSON key '" + key + "'");
  if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0)
    throw PreconditionError("matrix JSON dim must be a positive integer");
  const auto n = j["dim"].get<std::size_t>();
  const json zeros = json::array();
  const json& re = j["re"];
  const json& im = j.contains("im") ? j["im"] : zeros;
  auto check = [n](const json& part, const char* name, bool optional) {
    if (optional && part.empty()) return;
    if (!part.is_array() || part.size() != n)
      throw DimensionError(std::string("matrix JSON '") + name + "' must have dim rows");
    for (const auto& row : part)
      if (!row.is_array() || row.size() != n)
        throw DimensionError(std::string("matrix JSON '") + name + "' rows must have dim entries");
  };
  check(re, "re", false);
  check(im, "im", true);
  std::vector<complex> entries;
  entries.reserve(n * n);
  try {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        entries.emplace_back(re[r][c].get<double>(), im.empty() ? 0.0 : im[r][c].get<double>());
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("matrix JSON entries must be numbers: ") + e.what());
  }
  return ComplexMatrix(n, n, std::move(entries));
}

inline json to_json(const DensityMatrix& rho) {
  auto j = matrix_to_json(rho.matrix());
  if (rho.label()) j["label"] = *rho.label();
  return j;
}

inline json to_json(const BasisChange& c) { return matrix_to_json(c.matrix()); }

inline DensityMatrix density_from_json(const json& j, bool repair = false) {
  std::optional<std::string> label;
  if (j.is_object() && j.contains("label") && j["label"].is_string())
    label = j["label"].get<std::string>();
  return DensityMatrix(matrix_from_json(j), DensityMatrix::Options{repair}, std::move(label));
}

inline BasisChange basis_from_json(const json& j) { return BasisChange(matrix_from_json(j)); }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace qlab::io
