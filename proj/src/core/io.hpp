// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/scatter.hpp"
#include "core/solver.hpp"

namespace kgw {

inline constexpr const char* kVersion = "0.1.0";

// Output schema versions, recorded in the manifest.
inline const std::map<std::string, int> kSchemas = {{"densities", 1}, {"field", 1},   {"interface", 1},
                                                    {"boundary", 1},  {"report", 1},  {"convergence", 1},
                                                    {"sweep", 1},     {"manifest", 1}};

// Buffered CSV writer; throws Error(Io) on failure.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(const std::string& s);
  void end_row();
  void close();

 private:
  void sep();
  std::FILE* f_ = nullptr;
  std::string path_;
  bool first_ = true;
};

void ensure_dir(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);
void write_text(const std::string& path, const std::string& text);

void write_boundary_csv(const std::string& path, const Boundary& bd);
void write_densities_csv(const std::string& path, const Solution& sol);
void write_interface_csv(const std::string& path, const Boundary& bd);
void write_sweep_csv(const std::string& path, const std::vector<ScatterResult>& rows);

// Report JSON: residual history, iterations, timings, sizes and diagnostics.
std::string report_json(const Solution& sol, const Diagnostics* diag);

class Manifest {
 public:
  Manifest(std::string command, std::string config_echo);
  void add_file(const std::string& kind, const std::string& path);
  void add_timing(const std::string& phase, double seconds);
  void set(const std::string& key, const std::string& json_value);
  void write(const std::string& path) const;

 private:
  std::string command_, config_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<std::pair<std::string, std::string>> extra_;
};

}  // namespace kgw
