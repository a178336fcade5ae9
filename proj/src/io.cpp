#include "arlgm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "arlgm/errors.hpp"

namespace arlgm {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view token, double* out) {
  std::string_view s = trim(token);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json mat_json(const Matrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix json_mat(const json& j, Eigen::Index rows, Eigen::Index cols,
                const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw IoError(what + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw IoError(what + ": expected " + std::to_string(cols) + " columns");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) throw IoError(what + ": non-numeric entry");
      a(i, k) = cell.get<double>();
    }
  }
  return a;
}

json edges_json(const EdgeSet& edges) {
  json out = json::array();
  for (const auto& [k, h] : edges.pairs()) out.push_back(json::array({k, h}));
  return out;
}

EdgeSet json_edges(const json& j, int m, const std::string& what) {
  if (!j.is_array()) throw IoError(what + ": edge list must be an array");
  EdgeSet edges(m);
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw IoError(what + ": edges must be integer pairs");
    }
    const int k = e[0].get<int>(), h = e[1].get<int>();
    if (k < 0 || h < 0 || k >= m || h >= m || k == h) {
      throw IoError(what + ": edge (" + std::to_string(k) + ", " +
                    std::to_string(h) + ") out of range");
    }
    edges.insert(k, h);
  }
  return edges;
}

double get_num(const json& j, const char* key, double fallback = 0.0) {
  if (!j.contains(key) || !j[key].is_number()) return fallback;
  return j[key].get<double>();
}

int require_int(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw IoError(what + ": missing integer field '" + key + "'");
  }
  return j[key].get<int>();
}

json load_json(const std::string& path, const char* kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!j.is_object() || j.value("kind", std::string()) != kind) {
    throw IoError(path + ": not a " + std::string(kind) + " file");
  }
  return j;
}

void store_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(1, '\t') << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::string quote_dot(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> names;
  std::string line;
  std::size_t cols = 0;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv(line);
    if (first) {
      first = false;
      cols = cells.size();
      std::vector<double> values(cols);
      bool numeric = true;
      for (std::size_t k = 0; k < cols; ++k) {
        if (!parse_double(cells[k], &values[k])) {
          numeric = false;
          break;
        }
      }
      if (numeric) {
        for (std::size_t k = 0; k < cols; ++k) {
          names.push_back("x" + std::to_string(k));
        }
        rows.push_back(std::move(values));
      } else {
        for (const std::string& cell : cells) {
          std::string name(trim(cell));
          if (name.empty()) {
            throw IoError(path + ": empty column name in header");
          }
          names.push_back(std::move(name));
        }
      }
      continue;
    }
    if (cells.size() != cols) {
      throw IoError(path + ": line " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(cols));
    }
    std::vector<double> values(cols);
    for (std::size_t k = 0; k < cols; ++k) {
      if (!parse_double(cells[k], &values[k])) {
        throw IoError(path + ": line " + std::to_string(line_no) +
                      ": cell '" + cells[k] + "' is not a number");
      }
    }
    rows.push_back(std::move(values));
  }
  if (first) throw IoError(path + ": empty file");
  if (rows.empty()) throw IoError(path + ": no data rows");
  Table table;
  table.names = std::move(names);
  table.data.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rows[i][k];
    }
  }
  return table;
}

void write_csv(const std::string& path, const Table& table) {
  if (static_cast<Eigen::Index>(table.names.size()) != table.data.cols()) {
    throw ConfigError("write_csv: name count does not match column count");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t k = 0; k < table.names.size(); ++k) {
    if (k) out << ',';
    out << table.names[k];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < table.data.rows(); ++i) {
    for (Eigen::Index k = 0; k < table.data.cols(); ++k) {
      if (k) out << ',';
      out << format_double(table.data(i, k));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_true_model(const std::string& path, const LatentArModel& model,
                      std::uint64_t seed) {
  json j;
  j["kind"] = "true_model";
  j["m"] = model.m;
  j["l"] = model.l;
  j["n"] = model.n;
  j["seed"] = seed;
  j["companion_radius"] = model.companion_radius;
  j["a"] = mat_json(model.a);
  j["edges"] = edges_json(model.edges);
  store_json(path, j);
}

LatentArModel read_true_model(const std::string& path, std::uint64_t* seed) {
  const json j = load_json(path, "true_model");
  const int m = require_int(j, "m", path);
  const int l = require_int(j, "l", path);
  const int n = require_int(j, "n", path);
  if (m < 1 || l < 0 || n < 0) throw IoError(path + ": invalid dimensions");
  if (seed) {
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
      throw IoError(path + ": missing seed");
    }
    *seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("a") || !j.contains("edges")) {
    throw IoError(path + ": missing coefficients or edges");
  }
  Matrix a = json_mat(j["a"], m + l,
                      static_cast<Eigen::Index>(m + l) * (n + 1), path);
  return LatentArModel{m, l, n, std::move(a), json_edges(j["edges"], m, path),
                       get_num(j, "companion_radius")};
}

void write_identified_model(const std::string& path,
                            const ScoredModel& point) {
  const FixedModel& model = point.model;
  json j;
  j["kind"] = "identified_model";
  j["m"] = model.m;
  j["n"] = model.n;
  j["l"] = model.l;
  j["lambda"] = point.reg.lambda;
  j["gamma"] = point.reg.gamma;
  j["status"] = point.status;
  j["ok"] = point.ok;
  j["edges"] = edges_json(model.edges);
  j["g"] = mat_json(model.g);
  j["h"] = mat_json(model.h);
  j["x"] = mat_json(model.x);
  j["objective"] = model.objective;
  j["score"] = {{"d", point.d}, {"p", point.p}, {"f", point.f}};
  j["certificates"] = {
      {"dual",
       {{"gap", point.cert.gap},
        {"comp_slack_x", point.cert.comp_slack_x},
        {"comp_slack_l", point.cert.comp_slack_l},
        {"min_eig_u", point.cert.min_eig_u},
        {"min_eig_v", point.cert.min_eig_v},
        {"group_margin", point.cert.group_margin},
        {"primal_objective", point.cert.primal_objective},
        {"dual_objective", point.cert.dual_objective},
        {"certified", point.cert.certified}}},
      {"extension",
       {{"moment_gap", point.ext.moment_gap},
        {"latent_margin", point.ext.latent_margin},
        {"entropy", point.ext.entropy},
        {"ok", point.ext.ok}}},
      {"transversal", point.transversal},
      {"unique", point.unique}};
  store_json(path, j);
}

ScoredModel read_identified_model(const std::string& path) {
  const json j = load_json(path, "identified_model");
  const int m = require_int(j, "m", path);
  const int n = require_int(j, "n", path);
  const int l = require_int(j, "l", path);
  if (m < 1 || n < 0 || l < 0) throw IoError(path + ": invalid dimensions");
  const Eigen::Index bigm = static_cast<Eigen::Index>(m) * (n + 1);
  ScoredModel point;
  point.reg.lambda = get_num(j, "lambda", 1.0);
  point.reg.gamma = get_num(j, "gamma", 1.0);
  point.status = j.value("status", std::string("ok"));
  point.ok = j.value("ok", true);
  FixedModel& model = point.model;
  model.m = m;
  model.n = n;
  model.l = l;
  if (!j.contains("edges") || !j.contains("g") || !j.contains("h") ||
      !j.contains("x")) {
    throw IoError(path + ": missing model fields");
  }
  model.edges = json_edges(j["edges"], m, path);
  model.g = json_mat(j["g"], l, bigm, path);
  model.h = json_mat(j["h"], l, l, path);
  model.x = json_mat(j["x"], bigm, bigm, path);
  model.low_rank = model.g.transpose() * model.h * model.g;
  model.objective = get_num(j, "objective");
  if (j.contains("score") && j["score"].is_object()) {
    const json& s = j["score"];
    point.d = get_num(s, "d");
    point.p = static_cast<int>(get_num(s, "p"));
    point.f = get_num(s, "f");
  }
  if (j.contains("certificates") && j["certificates"].is_object()) {
    const json& c = j["certificates"];
    point.transversal = c.value("transversal", false);
    point.unique = c.value("unique", false);
    if (c.contains("dual") && c["dual"].is_object()) {
      const json& d = c["dual"];
      point.cert.gap = get_num(d, "gap");
      point.cert.comp_slack_x = get_num(d, "comp_slack_x");
      point.cert.comp_slack_l = get_num(d, "comp_slack_l");
      point.cert.min_eig_u = get_num(d, "min_eig_u");
      point.cert.min_eig_v = get_num(d, "min_eig_v");
      point.cert.group_margin = get_num(d, "group_margin");
      point.cert.primal_objective = get_num(d, "primal_objective");
      point.cert.dual_objective = get_num(d, "dual_objective");
      point.cert.certified = d.value("certified", false);
    }
    if (c.contains("extension") && c["extension"].is_object()) {
      const json& e = c["extension"];
      point.ext.moment_gap = get_num(e, "moment_gap");
      point.ext.latent_margin = get_num(e, "latent_margin");
      point.ext.entropy = get_num(e, "entropy");
      point.ext.ok = e.value("ok", false);
    }
  }
  return point;
}

void write_sweep_report(const std::string& path, const SweepResult& result,
                        const SweepOptions& opts) {
  json j;
  j["kind"] = "sweep_report";
  j["m"] = result.cov.lags.dim();
  j["n"] = opts.n;
  j["sample_size"] = result.cov.sample_size;
  j["bartlett_window"] = result.bartlett_window;
  j["score"] = opts.additive_score ? "additive" : "multiplicative";
  json points = json::array();
  for (const ScoredModel& point : result.models) {
    json row;
    row["lambda"] = point.reg.lambda;
    row["gamma"] = point.reg.gamma;
    row["status"] = point.status;
    row["ok"] = point.ok;
    if (point.ok) {
      row["edges"] = point.model.edges.count();
      row["l"] = point.model.l;
      row["d"] = point.d;
      row["p"] = point.p;
      row["f"] = point.f;
      row["gap"] = point.cert.gap;
      row["certified"] = point.cert.certified;
      row["moment_gap"] = point.ext.moment_gap;
      row["latent_margin"] = point.ext.latent_margin;
      row["transversal"] = point.transversal;
      row["unique"] = point.unique;
    }
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  j["selected"] = result.selected;
  if (result.selected >= 0 &&
      result.selected < static_cast<int>(result.models.size())) {
    const ScoredModel& best = result.models[result.selected];
    j["selected_point"] = {{"lambda", best.reg.lambda},
                           {"gamma", best.reg.gamma},
                           {"edges", best.model.edges.count()},
                           {"l", best.model.l},
                           {"d", best.d},
                           {"p", best.p},
                           {"f", best.f}};
  }
  store_json(path, j);
}

std::string dot_string(const EdgeSet& edges, int l,
                       const std::vector<std::string>& names) {
  const int m = edges.dim();
  if (l < 0) throw ConfigError("dot_string: negative latent count");
  std::vector<std::string> labels = names;
  if (labels.empty()) {
    for (int k = 0; k < m; ++k) labels.push_back("x" + std::to_string(k));
  }
  if (static_cast<int>(labels.size()) != m) {
    throw ConfigError("dot_string: name count does not match dimension");
  }
  std::ostringstream out;
  out << "graph conditional_dependence {\n";
  for (int k = 0; k < m; ++k) {
    out << "  " << quote_dot(labels[k]) << " [shape=ellipse];\n";
  }
  for (int i = 0; i < l; ++i) {
    out << "  \"u" << i << "\" [shape=box, style=dashed];\n";
  }
  for (const auto& [k, h] : edges.pairs()) {
    out << "  " << quote_dot(labels[k]) << " -- " << quote_dot(labels[h])
        << ";\n";
  }
  for (int i = 0; i < l; ++i) {
    for (int k = 0; k < m; ++k) {
      out << "  \"u" << i << "\" -- " << quote_dot(labels[k]) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

void write_dot(const std::string& path, const EdgeSet& edges, int l,
               const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << dot_string(edges, l, names);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace arlgm
