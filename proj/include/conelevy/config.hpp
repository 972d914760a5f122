#pragma once

// Run configuration: a JSON document (schema_version 1) describing the cone,
// grids, Levy model, drift and simulation parameters. See docs/config.md.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conelevy/embedding.hpp"
#include "conelevy/fuzzy.hpp"
#include "conelevy/geometry.hpp"
#include "conelevy/levy.hpp"

namespace conelevy::config {

inline constexpr int kSchemaVersion = 1;

/// Schema or parse problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimSettings {
  double horizon = 1.0;
  double eps = 0.01;
  std::size_t trajectories = 1;
  std::uint64_t master_seed = 0;
};

struct VerifySettings {
  double significance = 0.01;
  std::size_t times = 50;
  std::size_t probes = 5;
  std::vector<double> jump_eps;  // empty: use the simulation eps
};

struct OutputSettings {
  std::string directory = "out";
  bool trajectories = true;
};

struct RunConfig {
  ConeSpec cone;
  AlphaGrid alpha_grid;
  SphereGrid sphere;
  double p;
  LevyTriplet triplet;
  SimSettings sim;
  VerifySettings verify;
  OutputSettings outputs;
};

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing field " + (path.empty() ? key : path + "." + key));
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline double number_field(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), path.empty() ? key : path + "." + key);
}

inline Vec2 point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected [x, y]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline std::vector<Vec2> points(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of points");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace detail

/// {alphas: [...], cuts: [[[x,y],...], ...]}; alphas must equal `grid`.
inline FuzzyVector parse_fuzzy(const nlohmann::json& j, const AlphaGrid& grid, const std::string& path) {
  using namespace detail;
  const auto alphas = numbers(field(j, "alphas", path), path + ".alphas");
  if (alphas != grid.levels()) throw ConfigError(path + ".alphas: must equal alpha_grid");
  const json& cj = field(j, "cuts", path);
  if (!cj.is_array()) throw ConfigError(path + ".cuts: expected an array");
  std::vector<ConvexPolygon> cuts;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string p = path + ".cuts[" + std::to_string(i) + "]";
    const auto pts = points(cj[i], p);
    auto hull = convex_hull(pts);
    if (!hull) throw ConfigError(p + ": empty cut");
    cuts.push_back(std::move(*hull));
  }
  return guarded(path, [&] { return make_fuzzy(grid, std::move(cuts)); });
}

inline nlohmann::json fuzzy_to_json(const FuzzyVector& x) {
  nlohmann::json cuts = nlohmann::json::array();
  for (const auto& c : x.cuts()) {
    nlohmann::json pts = nlohmann::json::array();
    for (const Vec2& v : c.vertices()) pts.push_back({v.x, v.y});
    cuts.push_back(pts);
  }
  return {{"alphas", x.grid().levels()}, {"cuts", cuts}};
}

/// Line and column of a byte offset, 1-based.
inline std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline RunConfig parse_config(const std::string& text) {
  using namespace detail;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("JSON syntax error at " + locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("top level must be an object");
  const double version = number_field(root, "schema_version", "");
  if (version != kSchemaVersion) throw ConfigError("schema_version: unsupported version");

  const json& cj = field(root, "cone", "");
  ConeSpec cone = guarded("cone", [&] {
    return ConeSpec(points(field(cj, "normals", "cone"), "cone.normals"),
                    points(field(cj, "generators", "cone"), "cone.generators"));
  });
  if (!cone_is_proper(cone)) throw ConfigError("cone: not a proper cone");

  AlphaGrid agrid = guarded("alpha_grid", [&] { return AlphaGrid(numbers(field(root, "alpha_grid", ""), "alpha_grid")); });
  const double n = number_field(root, "sphere_n", "");
  if (n != static_cast<double>(static_cast<std::size_t>(n))) throw ConfigError("sphere_n: expected an integer");
  SphereGrid sgrid = guarded("sphere_n", [&] { return SphereGrid(static_cast<std::size_t>(n)); });
  const double p = root.contains("p") ? number_field(root, "p", "") : 2.0;
  if (!(p >= 1.0)) throw ConfigError("p: must be >= 1");

  const json& mj = field(root, "model", "");
  const double alpha = number_field(mj, "alpha", "model");
  const double c_alpha = mj.contains("c_alpha") ? number_field(mj, "c_alpha", "model") : 1.0;
  const json& aj = field(mj, "atoms", "model");
  if (!aj.is_array()) throw ConfigError("model.atoms: expected an array");
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < aj.size(); ++j) {
    const std::string path = "model.atoms[" + std::to_string(j) + "]";
    const FuzzyVector x = parse_fuzzy(field(aj[j], "fuzzy", path), agrid, path + ".fuzzy");
    const double w = number_field(aj[j], "weight", path);
    atoms.push_back({guarded(path, [&] { return LevyModel::unit_atom(x, sgrid, p); }), w});
  }
  LevyModel model = guarded("model", [&] { return LevyModel(alpha, c_alpha, std::move(atoms), cone, agrid, sgrid, p); });

  EmbeddedFunction gamma = pettis_centering(model);
  if (root.contains("gamma")) {
    const json& gj = root["gamma"];
    const json& mode = field(gj, "mode", "gamma");
    if (mode == "explicit") {
      const json& vj = field(gj, "values", "gamma");
      if (!vj.is_array() || vj.size() != agrid.size()) throw ConfigError("gamma.values: expected one row per alpha level");
      std::vector<double> vals;
      for (std::size_t i = 0; i < vj.size(); ++i) {
        const auto row = numbers(vj[i], "gamma.values[" + std::to_string(i) + "]");
        if (row.size() != sgrid.size()) throw ConfigError("gamma.values[" + std::to_string(i) + "]: expected sphere_n entries");
        vals.insert(vals.end(), row.begin(), row.end());
      }
      gamma = guarded("gamma.values", [&] { return EmbeddedFunction(agrid, sgrid, std::move(vals)); });
    } else if (mode == "centering_plus") {
      const double delta = gj.contains("delta") ? number_field(gj, "delta", "gamma") : 0.0;
      if (!(delta >= 0.0)) throw ConfigError("gamma.delta: must be >= 0");
      if (gj.contains("element")) {
        gamma.axpy(delta, embed(parse_fuzzy(gj["element"], agrid, "gamma.element"), sgrid));
      } else if (delta != 0.0) {
        throw ConfigError("gamma.element: required when delta > 0");
      }
    } else {
      throw ConfigError("gamma.mode: expected \"explicit\" or \"centering_plus\"");
    }
  }

  SimSettings sim;
  if (root.contains("sim")) {
    const json& sj = root["sim"];
    sim.horizon = number_field(sj, "T", "sim");
    sim.eps = number_field(sj, "eps", "sim");
    const double trajectories = number_field(sj, "trajectories", "sim");
    if (!(trajectories >= 1) || trajectories != static_cast<double>(static_cast<std::size_t>(trajectories))) {
      throw ConfigError("sim.trajectories: expected a positive integer");
    }
    sim.trajectories = static_cast<std::size_t>(trajectories);
    const json& seed = field(sj, "master_seed", "sim");
    if (!seed.is_number_unsigned()) throw ConfigError("sim.master_seed: expected a non-negative integer");
    sim.master_seed = seed.get<std::uint64_t>();
    if (!(sim.horizon > 0.0)) throw ConfigError("sim.T: must be > 0");
    if (!(sim.eps > 0.0)) throw ConfigError("sim.eps: must be > 0");
  }

  VerifySettings verify;
  if (root.contains("verify")) {
    const json& vj = root["verify"];
    if (vj.contains("significance")) verify.significance = number_field(vj, "significance", "verify");
    if (!(verify.significance > 0.0 && verify.significance < 1.0)) throw ConfigError("verify.significance: must lie in (0, 1)");
    if (vj.contains("times")) verify.times = static_cast<std::size_t>(number_field(vj, "times", "verify"));
    if (verify.times < 2) throw ConfigError("verify.times: need at least 2");
    if (vj.contains("probes")) verify.probes = static_cast<std::size_t>(number_field(vj, "probes", "verify"));
    if (vj.contains("jump_eps")) verify.jump_eps = numbers(vj["jump_eps"], "verify.jump_eps");
  }
  for (double e : verify.jump_eps) {
    if (e < sim.eps) throw ConfigError("verify.jump_eps: values must be >= sim.eps");
  }

  OutputSettings outputs;
  if (root.contains("outputs")) {
    const json& oj = root["outputs"];
    if (oj.contains("directory")) {
      if (!oj["directory"].is_string()) throw ConfigError("outputs.directory: expected a string");
      outputs.directory = oj["directory"].get<std::string>();
    }
    if (oj.contains("trajectories")) {
      if (!oj["trajectories"].is_boolean()) throw ConfigError("outputs.trajectories: expected true or false");
      outputs.trajectories = oj["trajectories"].get<bool>();
    }
  }

  return RunConfig{std::move(cone), agrid, sgrid, p, LevyTriplet{std::move(model), std::move(gamma)},
                   sim, std::move(verify), std::move(outputs)};
}

}  // namespace conelevy::config
