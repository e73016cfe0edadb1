#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixgp/design_space.hpp"
#include "mixgp/errors.hpp"
#include "mixgp/gp.hpp"
#include "mixgp/kernels.hpp"

namespace mixgp::io {

using nlohmann::json;

// ---- design space ---------------------------------------------------------
//
// {"variables": [
//    {"name": "x", "kind": "continuous", "lower": 0, "upper": 1},
//    {"name": "z", "kind": "integer", "lower": 1, "upper": 5},
//    {"name": "c", "kind": "categorical", "levels": ["red", "blue"]}]}
//
// A categorical entry may give "count": L instead of "levels"; its levels are
// then named "1".."L".

inline json to_json(const DesignSpace& space) {
  json vars = json::array();
  for (const auto& v : space.variables()) {
    json j;
    j["name"] = v.name();
    switch (v.kind()) {
      case VariableKind::Continuous:
        j["kind"] = "continuous";
        j["lower"] = v.as_continuous().lower;
        j["upper"] = v.as_continuous().upper;
        break;
      case VariableKind::Integer:
        j["kind"] = "integer";
        j["lower"] = v.as_integer().lower;
        j["upper"] = v.as_integer().upper;
        break;
      case VariableKind::Categorical:
        j["kind"] = "categorical";
        j["levels"] = v.as_categorical().levels;
        break;
    }
    vars.push_back(std::move(j));
  }
  return json{{"variables", vars}};
}

inline DesignSpace design_space_from_json(const json& doc) {
  try {
    if (!doc.contains("variables") || !doc["variables"].is_array()) {
      throw ParseError("design space needs a 'variables' array");
    }
    std::vector<VariableSpec> vars;
    std::size_t index = 0;
    for (const auto& j : doc["variables"]) {
      const std::string name = j.contains("name") ? j["name"].get<std::string>() : "v" + std::to_string(index);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "continuous") {
        vars.push_back(VariableSpec::continuous(name, j.at("lower").get<double>(), j.at("upper").get<double>()));
      } else if (kind == "integer") {
        vars.push_back(VariableSpec::integer(name, j.at("lower").get<long>(), j.at("upper").get<long>()));
      } else if (kind == "categorical") {
        if (j.contains("levels")) {
          std::vector<std::string> levels;
          for (const auto& l : j["levels"]) levels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
          vars.push_back(VariableSpec::categorical(name, std::move(levels)));
        } else {
          vars.push_back(VariableSpec::categorical(name, j.at("count").get<int>()));
        }
      } else {
        throw ParseError("variable '" + name + "': unknown kind '" + kind + "'");
      }
      ++index;
    }
    return DesignSpace(std::move(vars));
  } catch (const json::exception& e) {
    throw ParseError(std::string("design space: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("design space: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline DesignSpace read_design_space(const std::string& path) {
  return design_space_from_json(parse_json(read_file(path), path));
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

// ---- delimited text -------------------------------------------------------

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(where + ": '" + s + "' is not a number");
  return v;
}

inline std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return ss.str();
}

/// Level index (1-based) from a cell holding a level name or a 1-based index.
inline int parse_level(const Categorical& cat, const std::string& cell, const std::string& where) {
  for (int l = 0; l < cat.count(); ++l) {
    if (cat.levels[static_cast<std::size_t>(l)] == cell) return l + 1;
  }
  int v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(where + ": unknown level '" + cell + "'");
  return v;
}

/// Cells of a point in design-space order; categorical cells hold level names.
inline std::vector<std::string> point_cells(const DesignSpace& space, const MixedPoint& p) {
  std::vector<std::string> cells;
  for (std::size_t v = 0; v < space.size(); ++v) {
    const auto& slot = space.slot(v);
    switch (slot.kind) {
      case VariableKind::Continuous: cells.push_back(format_double(p.continuous[slot.position])); break;
      case VariableKind::Integer: cells.push_back(format_double(p.integer[slot.position])); break;
      case VariableKind::Categorical: {
        const auto& cat = space.categorical(slot.position);
        const int l = p.categorical[slot.position];
        cells.push_back(l >= 1 && l <= cat.count() ? cat.levels[static_cast<std::size_t>(l - 1)]
                                                   : std::to_string(l));
        break;
      }
    }
  }
  return cells;
}

inline MixedPoint point_from_cells(const DesignSpace& space, const std::vector<std::string>& cells,
                                   const std::string& where) {
  MixedPoint p;
  p.continuous.resize(space.n_continuous());
  p.integer.resize(space.n_integer());
  p.categorical.resize(space.n_categorical());
  for (std::size_t v = 0; v < space.size(); ++v) {
    const auto& slot = space.slot(v);
    switch (slot.kind) {
      case VariableKind::Continuous: p.continuous[slot.position] = parse_double(cells[v], where); break;
      case VariableKind::Integer: p.integer[slot.position] = parse_double(cells[v], where); break;
      case VariableKind::Categorical:
        p.categorical[slot.position] = parse_level(space.categorical(slot.position), cells[v], where);
        break;
    }
  }
  return p;
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

inline std::vector<std::string> header(const DesignSpace& space) {
  std::vector<std::string> h;
  for (const auto& v : space.variables()) h.push_back(v.name());
  return h;
}

/// Points (and optionally targets in a final "y" column) as delimited text.
inline void write_points(std::ostream& os, const DesignSpace& space, const std::vector<MixedPoint>& points,
                         const std::vector<double>* targets = nullptr) {
  auto h = header(space);
  if (targets) h.emplace_back("y");
  os << join(h) << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto cells = point_cells(space, points[i]);
    if (targets) cells.push_back(format_double((*targets)[i]));
    os << join(cells) << '\n';
  }
}

inline void write_dataset(std::ostream& os, const Dataset& data) {
  write_points(os, data.space(), data.points(), &data.targets());
}

struct ParsedRows {
  std::vector<MixedPoint> points;
  std::vector<double> targets;
};

/// Reads delimited rows. The header must name the space's variables in order,
/// optionally followed by a target column. Points are validated.
inline ParsedRows read_rows(std::istream& is, const DesignSpace& space, bool require_targets,
                            const std::string& source = "data") {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(source + ": missing header row");
  const auto h = split_row(line);
  const auto expected = header(space);
  const bool has_target = h.size() == expected.size() + 1;
  if (!(h.size() == expected.size() || has_target)) {
    throw ParseError(source + ": header has " + std::to_string(h.size()) + " columns, expected " +
                     std::to_string(expected.size()) + (require_targets ? " + target" : ""));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (h[i] != expected[i]) throw ParseError(source + ": column " + std::to_string(i) + " is '" + h[i] +
                                              "', expected '" + expected[i] + "'");
  }
  if (require_targets && !has_target) throw ParseError(source + ": missing target column");

  ParsedRows rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    const std::string where = source + ":" + std::to_string(lineno);
    if (cells.size() != h.size()) throw ParseError(where + ": wrong number of columns");
    MixedPoint p = point_from_cells(space, cells, where);
    validate_point(space, p);
    rows.points.push_back(std::move(p));
    if (has_target) rows.targets.push_back(parse_double(cells.back(), where));
  }
  return rows;
}

inline Dataset read_dataset(const std::string& path, const DesignSpace& space) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  auto rows = read_rows(in, space, true, path);
  if (rows.points.empty()) throw ParseError(path + ": dataset has no rows");
  return Dataset(space, std::move(rows.points), std::move(rows.targets));
}

inline std::vector<MixedPoint> read_points(const std::string& path, const DesignSpace& space) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_rows(in, space, false, path).points;
}

/// Level correlation matrix with level-name headers.
inline void write_level_matrix(std::ostream& os, const Categorical& cat, const Eigen::MatrixXd& R) {
  std::vector<std::string> h{"level"};
  h.insert(h.end(), cat.levels.begin(), cat.levels.end());
  os << join(h) << '\n';
  for (Eigen::Index r = 0; r < R.rows(); ++r) {
    std::vector<std::string> cells{cat.levels[static_cast<std::size_t>(r)]};
    for (Eigen::Index c = 0; c < R.cols(); ++c) cells.push_back(format_double(R(r, c)));
    os << join(cells) << '\n';
  }
}

// ---- model ----------------------------------------------------------------

inline json to_json(const GpModel& model) {
  json points = json::array();
  const auto& space = model.space();
  for (const auto& p : model.dataset().points()) {
    json row = json::array();
    for (std::size_t v = 0; v < space.size(); ++v) {
      const auto& slot = space.slot(v);
      switch (slot.kind) {
        case VariableKind::Continuous: row.push_back(p.continuous[slot.position]); break;
        case VariableKind::Integer: row.push_back(p.integer[slot.position]); break;
        case VariableKind::Categorical: row.push_back(p.categorical[slot.position]); break;
      }
    }
    points.push_back(std::move(row));
  }
  return json{{"format", "mixgp-model"},
              {"version", 1},
              {"space", to_json(space)},
              {"kernel", std::string(to_string(model.kind()))},
              {"p", to_int(model.exponent())},
              {"epsilon", model.hyperparameters().epsilon()},
              {"jitter", model.requested_jitter()},
              {"jitter_used", model.jitter()},
              {"theta", model.hyperparameters().flat()},
              {"mu_hat", model.mu_hat()},
              {"sigma2_hat", model.sigma2_hat()},
              {"log_likelihood", model.log_likelihood()},
              {"points", points},
              {"targets", model.dataset().targets()}};
}

/// Rebuilds the model by conditioning on the stored data and hyperparameters.
inline GpModel model_from_json(const json& doc) {
  try {
    if (doc.value("format", std::string()) != "mixgp-model") throw ParseError("not a mixgp model document");
    DesignSpace space = design_space_from_json(doc.at("space"));
    const auto kind = parse_kernel_kind(doc.at("kernel").get<std::string>());
    const auto p = exponent_from_int(doc.at("p").get<int>());
    const double eps = doc.at("epsilon").get<double>();
    const double jitter = doc.at("jitter").get<double>();
    const auto theta = doc.at("theta").get<std::vector<double>>();
    std::vector<MixedPoint> points;
    for (const auto& row : doc.at("points")) {
      if (row.size() != space.size()) throw ParseError("model point has the wrong number of coordinates");
      MixedPoint pt;
      pt.continuous.resize(space.n_continuous());
      pt.integer.resize(space.n_integer());
      pt.categorical.resize(space.n_categorical());
      for (std::size_t v = 0; v < space.size(); ++v) {
        const auto& slot = space.slot(v);
        switch (slot.kind) {
          case VariableKind::Continuous: pt.continuous[slot.position] = row[v].get<double>(); break;
          case VariableKind::Integer: pt.integer[slot.position] = row[v].get<double>(); break;
          case VariableKind::Categorical: pt.categorical[slot.position] = row[v].get<int>(); break;
        }
      }
      points.push_back(std::move(pt));
    }
    auto targets = doc.at("targets").get<std::vector<double>>();
    auto hyper = HyperparameterSet::from_flat(space, kind, theta, eps);
    Dataset data(space, std::move(points), std::move(targets));
    return GpModel::condition(std::move(data), std::move(hyper), p, jitter);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

inline void write_model(const std::string& path, const GpModel& model) {
  write_text(path, to_json(model).dump(2) + "\n");
}

inline GpModel read_model(const std::string& path) { return model_from_json(parse_json(read_file(path), path)); }

}  // namespace mixgp::io
