#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "matdist/analysis.hpp"
#include "matdist/distribution.hpp"
#include "matdist/kernels.hpp"
#include "matdist/recovery.hpp"
#include "matdist/sample_matrix.hpp"

namespace matdist::io {

using nlohmann::json;

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("parse_double: bad number: " + std::string(s));
  return v;
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline json read_json_file(const std::filesystem::path& path) {
  return json::parse(read_text(path));
}

// CSV payload: row-major, comma separated, no header, one row per line.
inline std::string matrix_csv(const SampleMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out += ',';
      out += format_double(m.at(i, j));
    }
    out += '\n';
  }
  return out;
}

inline void write_matrix_csv(const std::filesystem::path& path,
                             const SampleMatrix& m) {
  write_text(path, matrix_csv(m));
}

inline SampleMatrix parse_matrix_csv(const std::string& text) {
  SampleMatrix m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::size_t field = 0;
    while (true) {
      std::size_t comma = line.find(',', field);
      std::string_view cell = comma == std::string_view::npos
                                  ? line.substr(field)
                                  : line.substr(field, comma - field);
      m.values.push_back(parse_double(cell));
      ++cols;
      if (comma == std::string_view::npos) break;
      field = comma + 1;
    }
    if (m.rows == 0) {
      m.cols = cols;
    } else if (cols != m.cols) {
      throw std::runtime_error("matrix csv is not rectangular");
    }
    ++m.rows;
  }
  if (m.rows == 0) throw std::runtime_error("matrix csv is empty");
  m.symmetric = m.is_symmetric_payload();
  return m;
}

inline SampleMatrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv(read_text(path));
}

// m.csv -> m.manifest.json
inline std::filesystem::path manifest_path_for(
    const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  if (p.extension() == ".csv") p.replace_extension();
  p += ".manifest.json";
  return p;
}

inline json matrix_manifest(const SampleMatrix& m) {
  return json{{"kernel_id", m.kernel_id}, {"grid_kind", m.grid_kind},
              {"seed", m.seed},           {"n", m.rows},
              {"m", m.cols},              {"symmetric", m.symmetric}};
}

inline void write_matrix(const std::filesystem::path& csv_path,
                         const SampleMatrix& m) {
  write_matrix_csv(csv_path, m);
  write_json_file(manifest_path_for(csv_path), matrix_manifest(m));
}

// Reads the payload and, when the sidecar manifest exists, the provenance.
inline SampleMatrix read_matrix(const std::filesystem::path& csv_path) {
  SampleMatrix m = read_matrix_csv(csv_path);
  std::filesystem::path mp = manifest_path_for(csv_path);
  if (std::filesystem::exists(mp)) {
    json j = read_json_file(mp);
    m.kernel_id = j.value("kernel_id", std::string());
    m.grid_kind = j.value("grid_kind", std::string());
    m.seed = j.value("seed", std::uint64_t{0});
    m.symmetric = j.value("symmetric", m.symmetric);
    if (j.contains("n") && j["n"].get<std::size_t>() != m.rows)
      throw std::runtime_error("manifest row count disagrees with csv");
    if (j.contains("m") && j["m"].get<std::size_t>() != m.cols)
      throw std::runtime_error("manifest column count disagrees with csv");
  }
  return m;
}

inline std::string replica_file_name(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "replica_%04zu.csv", r);
  return buf;
}

inline void write_distribution(const std::filesystem::path& dir,
                               const EmpiricalMatrixDistribution& emp) {
  std::filesystem::create_directories(dir);
  for (std::size_t r = 0; r < emp.matrices.size(); ++r)
    write_matrix_csv(dir / replica_file_name(r), emp.matrices[r]);
  json manifest{{"order", emp.order},
                {"replicas", emp.matrices.size()},
                {"base_seed", emp.base_seed},
                {"kernel_id", emp.kernel_id},
                {"grid_kind", emp.grid_kind}};
  write_json_file(dir / "manifest.json", manifest);
}

inline EmpiricalMatrixDistribution read_distribution(
    const std::filesystem::path& dir) {
  json manifest = read_json_file(dir / "manifest.json");
  EmpiricalMatrixDistribution emp;
  emp.order = manifest.at("order").get<std::size_t>();
  emp.base_seed = manifest.at("base_seed").get<std::uint64_t>();
  emp.kernel_id = manifest.at("kernel_id").get<std::string>();
  emp.grid_kind = manifest.at("grid_kind").get<std::string>();
  std::size_t replicas = manifest.at("replicas").get<std::size_t>();
  emp.matrices.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    SampleMatrix m = read_matrix_csv(dir / replica_file_name(r));
    if (m.rows != emp.order || m.cols != emp.order)
      throw std::runtime_error("replica order disagrees with manifest");
    m.kernel_id = emp.kernel_id;
    m.grid_kind = emp.grid_kind;
    m.seed = rng::derive_seed(emp.base_seed, r);
    emp.matrices.push_back(std::move(m));
  }
  return emp;
}

inline json to_json(const ComparisonReport& r) {
  return json{{"statistic", r.statistic},
              {"p_value", r.p_value},
              {"decision", std::string(to_string(r.decision))},
              {"alpha", r.alpha},
              {"permutations", r.permutations},
              {"q", r.q}};
}

inline json to_json(const InvarianceReport& r) {
  return json{{"group", std::string(to_string(r.group))},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"decision", std::string(to_string(r.decision))},
              {"alpha", r.alpha},
              {"permutations", r.permutations},
              {"q", r.q}};
}

inline json to_json(const PurityReport& r) {
  return json{{"min_row_separation", r.min_row_separation},
              {"min_col_separation", r.min_col_separation},
              {"n_probe", r.n_probe},
              {"m_probe", r.m_probe},
              {"verdict", std::string(to_string(r.verdict))},
              {"threshold", r.threshold}};
}

inline json to_json(const RecoveryResult& r) {
  return json{{"x_hat", r.x_hat},
              {"y_hat", r.y_hat},
              {"residual_max", r.residual_max},
              {"gauge", r.gauge}};
}

inline json to_json(const RecoveryValidation& v) {
  return json{{"p_value_x", v.p_value_x},
              {"p_value_y", v.p_value_y},
              {"residual_max", v.residual_max},
              {"alpha", v.alpha},
              {"pass", v.pass}};
}

inline json to_json(const FolnerTrace& t) {
  return json{{"statistic_id", t.statistic_id},
              {"window_sizes", t.window_sizes},
              {"averages", t.averages}};
}

inline json to_json(const EntropyProfile& p) {
  return json{{"epsilons", p.epsilons},
              {"sizes", p.sizes},
              {"counts", p.counts},
              {"diverging", p.diverging}};
}

inline json to_json(const SpectrumSummary& s) {
  return json{{"eigenvalues", s.eigenvalues},
              {"normalization", std::string(to_string(s.normalization))},
              {"n", s.order},
              {"seed", s.seed}};
}

inline json to_json(const DispersionReport& d) {
  return json{{"top_eigenvalues", d.top_eigenvalues},
              {"mean", d.mean},
              {"stddev", d.stddev},
              {"cv", d.cv},
              {"normalization", std::string(to_string(d.normalization))}};
}

inline json grid_manifest(const GridSample& grid, const GridRequest& request) {
  json params = json::object();
  if (request.kind == GridKind::kStationary) params["rho"] = request.rho;
  if (request.fixed_jitter) params["fixed_jitter"] = *request.fixed_jitter;
  if (grid.space_x.id == SpaceId::kCircleUniform ||
      grid.space_y.id == SpaceId::kCircleUniform)
    params["circumference"] = grid.space_x.id == SpaceId::kCircleUniform
                                  ? grid.space_x.circumference
                                  : grid.space_y.circumference;
  return json{{"grid_kind", std::string(to_string(grid.kind))},
              {"seed", grid.seed},
              {"n", grid.n()},
              {"m", grid.m()},
              {"space_x", std::string(to_string(grid.space_x.id))},
              {"space_y", std::string(to_string(grid.space_y.id))},
              {"params", params}};
}

inline std::string trace_csv(const FolnerTrace& t) {
  std::string out = "window_size,average\n";
  for (std::size_t i = 0; i < t.window_sizes.size(); ++i) {
    out += std::to_string(t.window_sizes[i]);
    out += ',';
    out += format_double(t.averages[i]);
    out += '\n';
  }
  return out;
}

inline std::string profile_csv(const EntropyProfile& p) {
  std::string out = "epsilon,n,H\n";
  for (std::size_t ei = 0; ei < p.epsilons.size(); ++ei)
    for (std::size_t si = 0; si < p.sizes.size(); ++si) {
      out += format_double(p.epsilons[ei]);
      out += ',';
      out += std::to_string(p.sizes[si]);
      out += ',';
      out += std::to_string(p.counts[ei][si]);
      out += '\n';
    }
  return out;
}

inline std::string spectrum_csv(const SpectrumSummary& s) {
  std::string out = "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(s.eigenvalues[i]);
    out += '\n';
  }
  return out;
}

}  // namespace matdist::io
