// SPDX-License-Identifier: Apache-2.0
#include "core/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/parallel.hpp"
#include "json.hpp"

namespace kgw {

using nlohmann::json;

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  for (const std::string& h : header) *this << h;
  end_row();
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::sep() {
  if (!first_) std::fputc(',', f_);
  first_ = false;
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  if (std::isnan(v)) std::fputs("nan", f_);
  else std::fprintf(f_, "%.17g", v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
  sep();
  std::fprintf(f_, "%lld", v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  std::fputs(s.c_str(), f_);
  return *this;
}

void CsvWriter::end_row() {
  std::fputc('\n', f_);
  first_ = true;
}

void CsvWriter::close() {
  if (!f_) return;
  const bool err = std::ferror(f_) != 0;
  const bool cerr = std::fclose(f_) != 0;
  f_ = nullptr;
  if (err || cerr) fail(ErrorCode::Io, "write failed for '" + path_ + "'");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) fail(ErrorCode::Io, "cannot create output directory '" + dir + "'");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

void write_boundary_csv(const std::string& path, const Boundary& bd) {
  CsvWriter w(path, {"panel_id", "node_id", "t", "x", "y", "nx", "ny", "speed", "weight", "is_buffer"});
  for (int j = 0; j < bd.n_over(); ++j) {
    w << bd.panel_of[j] << j << bd.t[j] << bd.pos[j].x << bd.pos[j].y << bd.normal[j].x << bd.normal[j].y
      << bd.speed[j] << bd.weight[j] << (bd.is_core(j) ? 0 : 1);
    w.end_row();
  }
  w.close();
}

void write_densities_csv(const std::string& path, const Solution& sol) {
  const Boundary& bd = *sol.boundary;
  CsvWriter w(path, {"node_id", "t", "sigma", "x", "y", "is_buffer", "re_rho", "im_rho", "re_mu", "im_mu"});
  for (int j = 0; j < bd.n_over(); ++j) {
    w << j << bd.t[j] << bd.sigma[j] << bd.pos[j].x << bd.pos[j].y << (bd.is_core(j) ? 0 : 1) << sol.rho[j].real()
      << sol.rho[j].imag() << sol.mu[j].real() << sol.mu[j].imag();
    w.end_row();
  }
  w.close();
}

void write_interface_csv(const std::string& path, const Boundary& bd) {
  CsvWriter w(path, {"t", "x", "y", "is_buffer"});
  auto row = [&](double t, bool buf) {
    const Vec2 p = bd.curve.eval(t).pos;
    w << t << p.x << p.y << (buf ? 1 : 0);
    w.end_row();
  };
  for (int p = 0; p < bd.n_panels(); ++p) {
    const Panel& pn = bd.panels[p];
    row(pn.a, pn.buffer);
    for (int i = 0; i < kNodesPerPanel; ++i) row(bd.t[pn.first + i], pn.buffer);
  }
  row(bd.panels.back().b, bd.panels.back().buffer);
  w.close();
}

void write_sweep_csv(const std::string& path, const std::vector<ScatterResult>& rows) {
  CsvWriter w(path,
              {"b", "R_L", "T_L", "T_L_prime", "ReA", "ImA", "ReB", "ImB", "ReC", "ImC", "n_iter", "wall_s"});
  const double nan = std::nan("");
  for (const ScatterResult& r : rows) {
    if (r.ok) {
      w << r.b << r.R_L << r.T_L << r.T_L_prime << r.A.real() << r.A.imag() << r.B.real() << r.B.imag()
        << r.C.real() << r.C.imag() << r.iterations << r.wall_s;
    } else {
      w << r.b;
      for (int k = 0; k < 9; ++k) w << nan;
      w << r.iterations << r.wall_s;
    }
    w.end_row();
  }
  w.close();
}

std::string report_json(const Solution& sol, const Diagnostics* diag) {
  const Boundary& bd = *sol.boundary;
  json j;
  j["converged"] = sol.gmres.converged;
  j["iterations"] = sol.gmres.iterations;
  j["residuals"] = sol.gmres.residuals;
  j["true_residual"] = sol.true_residual;
  j["two_mass"] = sol.two_mass;
  j["n_core"] = bd.n_core();
  j["n_over"] = bd.n_over();
  j["n_panels"] = bd.n_panels();
  j["n_core_panels"] = bd.n_core_panels();
  j["window"] = {bd.a, bd.b};
  j["buffered_window"] = {bd.ap, bd.bp};
  j["timings"] = {{"chunking", sol.timings.chunking},
                  {"build", sol.timings.build},
                  {"gmres", sol.timings.gmres},
                  {"matvec", sol.timings.matvec},
                  {"evaluation", sol.timings.evaluation}};
  j["threads"] = num_threads();
  if (diag) {
    j["diagnostics"] = {{"jump_u", diag->jumps.jump_u},
                        {"jump_flux", diag->jumps.jump_flux},
                        {"stencil_ratio", diag->stencil.ratio},
                        {"stencil_res_h1", diag->stencil.res1},
                        {"stencil_res_h2", diag->stencil.res2},
                        {"outgoing", diag->outgoing},
                        {"tail_fraction", diag->tail_fraction},
                        {"mu_consistency", diag->mu_consistency}};
  }
  return j.dump(2);
}

Manifest::Manifest(std::string command, std::string config_echo)
    : command_(std::move(command)), config_(std::move(config_echo)) {}

void Manifest::add_file(const std::string& kind, const std::string& path) { files_.emplace_back(kind, path); }

void Manifest::add_timing(const std::string& phase, double seconds) { timings_.emplace_back(phase, seconds); }

void Manifest::set(const std::string& key, const std::string& json_value) { extra_.emplace_back(key, json_value); }

void Manifest::write(const std::string& path) const {
  json j;
  j["command"] = command_;
  j["version"] = kVersion;
  j["config"] = json::parse(config_);
  j["files"] = json::array();
  for (const auto& f : files_) j["files"].push_back({{"kind", f.first}, {"path", f.second}});
  j["timings"] = json::object();
  for (const auto& t : timings_) j["timings"][t.first] = t.second;
  j["schemas"] = kSchemas;
  for (const auto& e : extra_) j[e.first] = json::parse(e.second);
  write_text(path, j.dump(2) + "\n");
}

}  // namespace kgw
