// SPDX-License-Identifier: Apache-2.0
#include "core/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kgw {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) { fail(ErrorCode::Config, field + ": " + what); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where.empty() ? "config" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

double num(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  return j.get<int>();
}

std::vector<double> nums(const json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array of numbers");
  std::vector<double> v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

Vec2 point(const json& j, const std::string& field) {
  const auto v = nums(j, field);
  if (v.size() != 2) bad(field, "expected [x, y]");
  return {v[0], v[1]};
}

cplx complex_value(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const auto v = nums(j, field);
  if (v.size() != 2) bad(field, "expected a number or [re, im]");
  return {v[0], v[1]};
}

ProblemConfig parse_problem(const json& j) {
  ProblemConfig c;
  if (j.contains("m")) {
    if (j.contains("m1") || j.contains("m2")) bad("m", "give either m or m1/m2");
    c.m1 = c.m2 = num(j["m"], "m");
  }
  if (j.contains("m1")) c.m1 = num(j["m1"], "m1");
  if (j.contains("m2")) c.m2 = num(j["m2"], "m2");
  if (j.contains("m1") != j.contains("m2")) {
    if (j.contains("m1")) c.m2 = c.m1;
    else c.m1 = c.m2;
  }
  if (j.contains("E")) c.E = num(j["E"], "E");
  if (j.contains("curve")) {
    const json& cj = j["curve"];
    check_keys(cj, "curve", {"family", "params", "coeffs_x", "coeffs_y"});
    if (cj.contains("family")) {
      if (!cj["family"].is_string()) bad("curve.family", "expected a string");
      c.curve.family = cj["family"].get<std::string>();
    }
    if (cj.contains("params")) c.curve.params = nums(cj["params"], "curve.params");
    if (cj.contains("coeffs_x")) c.curve.coeffs_x = nums(cj["coeffs_x"], "curve.coeffs_x");
    if (cj.contains("coeffs_y")) c.curve.coeffs_y = nums(cj["coeffs_y"], "curve.coeffs_y");
  }
  if (j.contains("window") && !j["window"].is_null()) {
    const auto w = nums(j["window"], "window");
    if (w.size() != 2) bad("window", "expected [a, b]");
    c.window = std::array<double, 2>{w[0], w[1]};
  }
  if (j.contains("eps")) c.eps = num(j["eps"], "eps");
  if (j.contains("tau")) c.tau = num(j["tau"], "tau");
  if (j.contains("nc")) c.nc = integer(j["nc"], "nc");
  if (j.contains("max_chunk_len")) c.max_chunk_len = num(j["max_chunk_len"], "max_chunk_len");
  if (j.contains("sources")) {
    const json& sj = j["sources"];
    if (!sj.is_array()) bad("sources", "expected an array");
    for (size_t i = 0; i < sj.size(); ++i) {
      const std::string f = "sources[" + std::to_string(i) + "]";
      check_keys(sj[i], f, {"pos", "strength", "side"});
      if (!sj[i].contains("pos")) bad(f + ".pos", "missing");
      PointSource s;
      s.pos = point(sj[i]["pos"], f + ".pos");
      if (sj[i].contains("strength")) s.strength = complex_value(sj[i]["strength"], f + ".strength");
      if (sj[i].contains("side")) s.side = integer(sj[i]["side"], f + ".side");
      c.sources.push_back(s);
    }
  }
  if (j.contains("gmres")) {
    const json& g = j["gmres"];
    check_keys(g, "gmres", {"tol", "max_iter"});
    if (g.contains("tol")) c.gmres_tol = num(g["tol"], "gmres.tol");
    if (g.contains("max_iter")) c.gmres_max_iter = integer(g["max_iter"], "gmres.max_iter");
  }
  if (j.contains("eps_trunc")) c.eps_trunc = num(j["eps_trunc"], "eps_trunc");
  if (j.contains("fast")) {
    if (!j["fast"].is_boolean()) bad("fast", "expected true or false");
    c.fast = j["fast"].get<bool>();
  }
  if (c.sources.empty()) bad("sources", "at least one point source is required");
  validate(c);
  return c;
}

json problem_json(const ProblemConfig& c) {
  json j;
  j["m1"] = c.m1;
  j["m2"] = c.m2;
  j["E"] = c.E;
  j["curve"] = {{"family", c.curve.family}, {"params", c.curve.params}};
  if (!c.curve.coeffs_x.empty() || !c.curve.coeffs_y.empty()) {
    j["curve"]["coeffs_x"] = c.curve.coeffs_x;
    j["curve"]["coeffs_y"] = c.curve.coeffs_y;
  }
  j["window"] = c.window ? json::array({(*c.window)[0], (*c.window)[1]}) : json(nullptr);
  j["eps"] = c.eps;
  j["tau"] = c.tau;
  j["nc"] = c.nc;
  j["max_chunk_len"] = c.max_chunk_len;
  j["sources"] = json::array();
  for (const PointSource& s : c.sources)
    j["sources"].push_back({{"pos", {s.pos.x, s.pos.y}}, {"strength", {s.strength.real(), s.strength.imag()}},
                            {"side", s.side}});
  j["gmres"] = {{"tol", c.gmres_tol}, {"max_iter", c.gmres_max_iter}};
  j["eps_trunc"] = c.eps_trunc;
  j["fast"] = c.fast;
  return j;
}

GridSpec grid_from(const std::vector<double>& v, const std::string& field) {
  if (v.size() != 6) bad(field, "expected [x0, x1, nx, y0, y1, ny]");
  GridSpec g{v[0], v[1], static_cast<int>(v[2]), v[3], v[4], static_cast<int>(v[5])};
  if (v[2] != g.nx || v[5] != g.ny || g.nx < 1 || g.ny < 1) bad(field, "nx and ny must be positive integers");
  if (g.nx > 1 && !(g.x0 < g.x1)) bad(field, "need x0 < x1");
  if (g.ny > 1 && !(g.y0 < g.y1)) bad(field, "need y0 < y1");
  return g;
}

}  // namespace

GridSpec parse_grid_spec(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      bad("grid", "cannot parse '" + item + "'");
    }
  }
  return grid_from(v, "grid");
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("config", std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, "", {"m", "m1", "m2", "E", "curve", "window", "eps", "tau", "nc", "max_chunk_len", "sources", "gmres",
                     "eps_trunc", "fast", "grid", "converge", "b_grid"});
  RunConfig rc;
  rc.problem = parse_problem(j);
  if (j.contains("grid")) rc.grid = grid_from(nums(j["grid"], "grid"), "grid");
  if (j.contains("converge")) {
    const json& cj = j["converge"];
    check_keys(cj, "converge", {"nc", "tau", "probes", "reference"});
    ConvergeSpec cs;
    if (cj.contains("nc")) {
      if (!cj["nc"].is_array()) bad("converge.nc", "expected an array of integers");
      for (size_t i = 0; i < cj["nc"].size(); ++i)
        cs.nc.push_back(integer(cj["nc"][i], "converge.nc[" + std::to_string(i) + "]"));
    }
    if (cj.contains("tau")) cs.tau = nums(cj["tau"], "converge.tau");
    if (cj.contains("probes")) {
      if (!cj["probes"].is_array()) bad("converge.probes", "expected an array of [x, y]");
      for (size_t i = 0; i < cj["probes"].size(); ++i)
        cs.probes.push_back(point(cj["probes"][i], "converge.probes[" + std::to_string(i) + "]"));
    }
    if (cj.contains("reference")) {
      if (!cj["reference"].is_string()) bad("converge.reference", "expected a string");
      cs.reference = cj["reference"].get<std::string>();
      if (cs.reference != "self" && cs.reference != "sommerfeld")
        bad("converge.reference", "expected 'self' or 'sommerfeld'");
    }
    for (int n : cs.nc)
      if (n < 1) bad("converge.nc", "entries must be positive");
    for (double t : cs.tau)
      if (!(t > 0.0)) bad("converge.tau", "entries must be positive");
    rc.converge = cs;
  }
  if (j.contains("b_grid")) {
    rc.b_grid = nums(j["b_grid"], "b_grid");
    for (double b : *rc.b_grid)
      if (!(b >= 0.0)) bad("b_grid", "values must be >= 0");
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string echo_run_config(const RunConfig& c, int indent) {
  json j = problem_json(c.problem);
  if (c.grid) {
    const GridSpec& g = *c.grid;
    j["grid"] = {g.x0, g.x1, g.nx, g.y0, g.y1, g.ny};
  }
  if (c.converge) {
    json cj;
    cj["nc"] = c.converge->nc;
    cj["tau"] = c.converge->tau;
    cj["probes"] = json::array();
    for (const Vec2& p : c.converge->probes) cj["probes"].push_back({p.x, p.y});
    cj["reference"] = c.converge->reference;
    j["converge"] = cj;
  }
  if (c.b_grid) j["b_grid"] = *c.b_grid;
  return j.dump(indent);
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.x0 == b.x0 && a.x1 == b.x1 && a.nx == b.nx && a.y0 == b.y0 && a.y1 == b.y1 && a.ny == b.ny;
}

bool operator==(const ConvergeSpec& a, const ConvergeSpec& b) {
  if (a.probes.size() != b.probes.size()) return false;
  for (size_t i = 0; i < a.probes.size(); ++i)
    if (a.probes[i].x != b.probes[i].x || a.probes[i].y != b.probes[i].y) return false;
  return a.nc == b.nc && a.tau == b.tau && a.reference == b.reference;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.problem == b.problem && a.grid == b.grid && a.converge == b.converge && a.b_grid == b.b_grid;
}

}  // namespace kgw
