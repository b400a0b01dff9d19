// Command-line front end: every subcommand maps 1:1 to one library
// operation, emits its data files plus a run manifest, and adds no
// statistical logic of its own.

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matdist/matdist.hpp"

namespace fs = std::filesystem;
using matdist::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kParamError = 2;
constexpr int kRejected = 3;

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(matdist::io::parse_double(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(csv)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw std::invalid_argument("expected positive integers: " + csv);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct RunContext {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void wrote(const fs::path& p) { artifacts.push_back(p.string()); }

  void finish(const fs::path& manifest_path) const {
    double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json j{{"command", command},
           {"parameters", parameters},
           {"seed", seed},
           {"artifacts", artifacts},
           {"version", std::string(matdist::kVersion)},
           {"duration_seconds", duration}};
    matdist::io::write_json_file(manifest_path, j);
  }
};

fs::path run_manifest_path(const fs::path& primary_out, bool is_directory) {
  if (is_directory) return primary_out / "run.json";
  fs::path p = primary_out;
  p += ".run.json";
  return p;
}

matdist::KernelSpec make_kernel(const std::string& name, double circumference,
                                const std::string& table_path) {
  if (name == "custom-tabulated") {
    if (table_path.empty())
      throw std::invalid_argument("custom-tabulated kernel needs --table");
    matdist::SampleMatrix t = matdist::io::read_matrix_csv(table_path);
    auto table = std::make_shared<matdist::TabulatedKernel>();
    table->rows = t.rows;
    table->cols = t.cols;
    table->values = t.values;
    return matdist::KernelSpec::tabulated(std::move(table),
                                          t.is_symmetric_payload(), false);
  }
  return matdist::KernelSpec::builtin(name, circumference);
}

matdist::GridRequest make_grid_request(const std::string& kind, double rho,
                                       std::optional<double> jitter) {
  matdist::GridRequest r;
  r.kind = matdist::grid_kind_from_string(kind);
  r.rho = rho;
  r.fixed_jitter = jitter;
  return r;
}

json report_with_params(json report, const RunContext& ctx) {
  report["parameters"] = ctx.parameters;
  return report;
}

// Shared flag bundle for the sampling-based subcommands.
struct SampleArgs {
  std::string kernel = "add-mod1";
  std::string grid = "bernoulli";
  std::size_t n = 16;
  std::size_t m = 0;  // 0: same as n
  std::uint64_t seed = 1;
  double rho = 0.5;
  double circumference = 1.0;
  std::string table;
  double jitter = -1.0;  // <0: random jitter
  std::size_t replicas = 0;
  std::size_t k = 0;
  std::size_t threads = 0;
  std::string out;
};

std::optional<double> jitter_opt(const SampleArgs& a) {
  if (a.jitter < 0.0) return std::nullopt;
  return a.jitter;
}

std::size_t thread_count(std::size_t requested) {
  return requested ? requested : matdist::default_thread_count();
}

int run_sample(const SampleArgs& a) {
  RunContext ctx;
  ctx.command = "sample";
  ctx.seed = a.seed;
  std::size_t m_cols = a.m ? a.m : a.n;
  matdist::KernelSpec kernel =
      make_kernel(a.kernel, a.circumference, a.table);
  matdist::GridRequest request = make_grid_request(a.grid, a.rho, jitter_opt(a));
  ctx.parameters = {{"kernel", a.kernel},
                    {"grid", a.grid},
                    {"seed", a.seed},
                    {"out", a.out}};
  if (a.grid == "stationary") ctx.parameters["rho"] = a.rho;
  if (a.jitter >= 0.0) ctx.parameters["jitter"] = a.jitter;
  if (a.circumference != 1.0) ctx.parameters["circumference"] = a.circumference;
  if (!a.table.empty()) ctx.parameters["table"] = a.table;

  if (a.replicas > 0) {
    std::size_t order = a.k ? a.k : a.n;
    ctx.parameters["k"] = order;
    ctx.parameters["replicas"] = a.replicas;
    auto emp = matdist::sample_matrix_distribution(
        kernel, request, order, a.replicas, a.seed, thread_count(a.threads));
    matdist::io::write_distribution(a.out, emp);
    ctx.wrote(fs::path(a.out) / "manifest.json");
    for (std::size_t r = 0; r < emp.replicas(); ++r)
      ctx.wrote(fs::path(a.out) / matdist::io::replica_file_name(r));
    ctx.finish(run_manifest_path(a.out, true));
    std::cout << "wrote " << emp.replicas() << " replicas to " << a.out << "\n";
    return kOk;
  }

  ctx.parameters["n"] = a.n;
  ctx.parameters["m"] = m_cols;
  matdist::GridSample grid = matdist::sample_grid(
      kernel.space_x, kernel.space_y, a.n, m_cols, request, a.seed);
  matdist::SampleMatrix matrix = matdist::evaluate_matrix(kernel, grid);
  matdist::io::write_matrix(a.out, matrix);
  ctx.parameters["grid_manifest"] = matdist::io::grid_manifest(grid, request);
  ctx.wrote(a.out);
  ctx.wrote(matdist::io::manifest_path_for(a.out));
  ctx.finish(run_manifest_path(a.out, false));
  std::cout << "wrote " << a.out << "\n";
  return kOk;
}

struct CompareArgs {
  std::string a, b;
  std::size_t q = 4;
  double alpha = 0.05;
  std::size_t perms = 999;
  std::uint64_t seed = 1;
  std::string out;
  bool assert_accept = false;
};

int run_compare(const CompareArgs& args) {
  RunContext ctx;
  ctx.command = "compare";
  ctx.seed = args.seed;
  ctx.parameters = {{"a", args.a},       {"b", args.b},
                    {"q", args.q},       {"alpha", args.alpha},
                    {"perms", args.perms}, {"seed", args.seed},
                    {"out", args.out},   {"assert_accept", args.assert_accept}};
  auto emp_a = matdist::io::read_distribution(args.a);
  auto emp_b = matdist::io::read_distribution(args.b);
  auto report = matdist::compare_distributions(emp_a, emp_b, args.q, args.alpha,
                                               args.perms, args.seed);
  matdist::io::json payload =
      report_with_params(matdist::io::to_json(report), ctx);
  if (args.out.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    matdist::io::write_json_file(args.out, payload);
    ctx.wrote(args.out);
    ctx.finish(run_manifest_path(args.out, false));
    std::cout << "statistic " << report.statistic << ", p " << report.p_value
              << ", " << matdist::to_string(report.decision) << "\n";
  }
  if (args.assert_accept && report.decision == matdist::TestDecision::kReject)
    return kRejected;
  return kOk;
}

struct InvarianceArgs {
  std::string in;
  std::string group = "full";
  std::size_t q = 4;
  double alpha = 0.05;
  std::size_t perms = 199;
  std::uint64_t seed = 1;
  std::string out;
  bool assert_accept = false;
};

int run_invariance(const InvarianceArgs& args) {
  RunContext ctx;
  ctx.command = "invariance";
  ctx.seed = args.seed;
  ctx.parameters = {{"in", args.in},     {"group", args.group},
                    {"q", args.q},       {"alpha", args.alpha},
                    {"perms", args.perms}, {"seed", args.seed},
                    {"out", args.out},   {"assert_accept", args.assert_accept}};
  matdist::PermutationGroup group;
  if (args.group == "full") {
    group = matdist::PermutationGroup::kFull;
  } else if (args.group == "diag") {
    group = matdist::PermutationGroup::kDiag;
  } else {
    throw std::invalid_argument("unknown group: " + args.group);
  }
  auto emp = matdist::io::read_distribution(args.in);
  auto report = matdist::invariance_check(emp, group, args.q, args.alpha,
                                          args.perms, args.seed);
  matdist::io::json payload =
      report_with_params(matdist::io::to_json(report), ctx);
  if (args.out.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    matdist::io::write_json_file(args.out, payload);
    ctx.wrote(args.out);
    ctx.finish(run_manifest_path(args.out, false));
    std::cout << "statistic " << report.statistic << ", p " << report.p_value
              << ", " << matdist::to_string(report.decision) << "\n";
  }
  if (args.assert_accept && report.decision == matdist::TestDecision::kReject)
    return kRejected;
  return kOk;
}

struct RecoverArgs {
  std::string in;
  std::string out;
  bool validate = false;
  double alpha = 0.01;
  bool assert_accept = false;
};

int run_recover(const RecoverArgs& args) {
  RunContext ctx;
  ctx.command = "recover";
  ctx.parameters = {{"in", args.in},
                    {"validate", args.validate},
                    {"alpha", args.alpha}};
  matdist::SampleMatrix m = matdist::io::read_matrix(args.in);
  ctx.seed = m.seed;
  auto result = matdist::recover_additive(m);
  json report = matdist::io::to_json(result);
  bool pass = true;
  if (args.validate) {
    auto v = matdist::validate_recovery(
        result, matdist::MeasureSpaceSpec::unit_interval(), args.alpha);
    report["validation"] = matdist::io::to_json(v);
    pass = v.pass;
  }
  fs::path out = args.out.empty()
                     ? fs::path(args.in).replace_extension(".recovery.json")
                     : fs::path(args.out);
  ctx.parameters["out"] = out.string();
  matdist::io::write_json_file(out, report_with_params(report, ctx));
  ctx.wrote(out);
  ctx.finish(run_manifest_path(out, false));
  std::cout << "residual_max " << result.residual_max << "\n";
  if (args.assert_accept && !pass) return kRejected;
  return kOk;
}

struct FolnerArgs {
  std::string in;
  std::string statistic = "entry-moment-1";
  std::string windows = "32,64,128,256";
  double cap = 1.0;
  std::string out;
};

int run_folner(const FolnerArgs& args) {
  RunContext ctx;
  ctx.command = "folner";
  ctx.parameters = {{"in", args.in},
                    {"statistic", args.statistic},
                    {"windows", args.windows},
                    {"cap", args.cap},
                    {"out", args.out}};
  matdist::SampleMatrix m = matdist::io::read_matrix(args.in);
  ctx.seed = m.seed;
  auto trace = matdist::folner_average(m, args.statistic,
                                       parse_size_list(args.windows), args.cap);
  matdist::io::write_text(args.out, matdist::io::trace_csv(trace));
  ctx.wrote(args.out);
  fs::path json_out = fs::path(args.out).replace_extension(".json");
  matdist::io::write_json_file(
      json_out, report_with_params(matdist::io::to_json(trace), ctx));
  ctx.wrote(json_out);
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << "trace tail " << trace.averages.back() << "\n";
  return kOk;
}

struct EntropyArgs {
  std::string source = "kernel";
  std::string kernel = "interval-euclid";
  double p = 0.5;
  double circumference = 1.0;
  std::string table;
  std::string eps = "0.25,0.1";
  std::string n_list = "500,2000";
  std::uint64_t seed = 1;
  std::string out;
};

int run_entropy(const EntropyArgs& args) {
  RunContext ctx;
  ctx.command = "entropy";
  ctx.seed = args.seed;
  ctx.parameters = {{"source", args.source}, {"eps", args.eps},
                    {"n_list", args.n_list}, {"seed", args.seed},
                    {"out", args.out}};
  matdist::EntropyMatrixSource source;
  if (args.source == "kernel") {
    ctx.parameters["kernel"] = args.kernel;
    source = matdist::kernel_entropy_source(
        make_kernel(args.kernel, args.circumference, args.table));
  } else if (args.source == "graph") {
    ctx.parameters["p"] = args.p;
    source = matdist::graph_entropy_source(args.p);
  } else {
    throw std::invalid_argument("unknown entropy source: " + args.source);
  }
  auto profile =
      matdist::entropy_profile(source, parse_size_list(args.n_list),
                               parse_double_list(args.eps), args.seed);
  matdist::io::write_text(args.out, matdist::io::profile_csv(profile));
  ctx.wrote(args.out);
  fs::path json_out = fs::path(args.out).replace_extension(".json");
  matdist::io::write_json_file(
      json_out, report_with_params(matdist::io::to_json(profile), ctx));
  ctx.wrote(json_out);
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << (profile.diverging ? "diverging" : "stable") << "\n";
  return kOk;
}

struct SpectrumArgs {
  std::string in;
  std::string normalization = "by-n";
  bool semicircle = false;
  std::string out;
};

int run_spectrum(const SpectrumArgs& args) {
  RunContext ctx;
  ctx.command = "spectrum";
  ctx.parameters = {{"in", args.in},
                    {"normalization", args.normalization},
                    {"semicircle", args.semicircle},
                    {"out", args.out}};
  matdist::SampleMatrix m = matdist::io::read_matrix(args.in);
  ctx.seed = m.seed;
  auto summary = matdist::spectrum(
      m, matdist::normalization_from_string(args.normalization));
  matdist::io::write_text(args.out, matdist::io::spectrum_csv(summary));
  ctx.wrote(args.out);
  json report = matdist::io::to_json(summary);
  if (args.semicircle)
    report["semicircle_distance"] = matdist::semicircle_distance(summary);
  fs::path json_out = fs::path(args.out).replace_extension(".json");
  matdist::io::write_json_file(json_out, report_with_params(report, ctx));
  ctx.wrote(json_out);
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << "top eigenvalue " << summary.eigenvalues.front() << "\n";
  return kOk;
}

struct DispersionArgs {
  std::string kernel = "interval-euclid";
  double circumference = 1.0;
  std::string table;
  std::size_t n = 512;
  std::size_t replicas = 20;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

int run_dispersion(const DispersionArgs& args) {
  RunContext ctx;
  ctx.command = "dispersion";
  ctx.seed = args.seed;
  ctx.parameters = {{"kernel", args.kernel},   {"n", args.n},
                    {"replicas", args.replicas}, {"seed", args.seed},
                    {"out", args.out}};
  auto report = matdist::spectral_dispersion(
      make_kernel(args.kernel, args.circumference, args.table), args.n,
      args.replicas, args.seed, thread_count(args.threads));
  matdist::io::write_json_file(
      args.out, report_with_params(matdist::io::to_json(report), ctx));
  ctx.wrote(args.out);
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << "cv " << report.cv << "\n";
  return kOk;
}

struct GridsCompareArgs {
  std::string kernel = "interval-euclid";
  double circumference = 1.0;
  std::string table;
  std::string grid_a = "bernoulli";
  std::string grid_b = "locally-finite";
  double rho_a = 0.5;
  double rho_b = 0.5;
  std::size_t k = 8;
  std::size_t replicas = 200;
  std::size_t q = 2;
  double alpha = 0.05;
  std::size_t perms = 199;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
  bool assert_accept = false;
};

int run_grids_compare(const GridsCompareArgs& args) {
  RunContext ctx;
  ctx.command = "grids-compare";
  ctx.seed = args.seed;
  ctx.parameters = {{"kernel", args.kernel}, {"grid_a", args.grid_a},
                    {"grid_b", args.grid_b}, {"k", args.k},
                    {"replicas", args.replicas}, {"q", args.q},
                    {"alpha", args.alpha},   {"perms", args.perms},
                    {"seed", args.seed},     {"out", args.out}};
  if (args.grid_a == "stationary") ctx.parameters["rho_a"] = args.rho_a;
  if (args.grid_b == "stationary") ctx.parameters["rho_b"] = args.rho_b;
  auto report = matdist::compare_grid_types(
      make_kernel(args.kernel, args.circumference, args.table),
      make_grid_request(args.grid_a, args.rho_a, std::nullopt),
      make_grid_request(args.grid_b, args.rho_b, std::nullopt), args.k,
      args.replicas, args.q, args.alpha, args.perms, args.seed,
      thread_count(args.threads));
  matdist::io::json payload =
      report_with_params(matdist::io::to_json(report), ctx);
  if (args.out.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    matdist::io::write_json_file(args.out, payload);
    ctx.wrote(args.out);
    ctx.finish(run_manifest_path(args.out, false));
    std::cout << "statistic " << report.statistic << ", p " << report.p_value
              << ", " << matdist::to_string(report.decision) << "\n";
  }
  if (args.assert_accept && report.decision == matdist::TestDecision::kReject)
    return kRejected;
  return kOk;
}

struct AldousArgs {
  std::string f3 = "xi-plus-eta-mod1";
  std::size_t n = 16;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t replicas = 0;
  bool symmetric = false;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

int run_aldous(const AldousArgs& args) {
  RunContext ctx;
  ctx.command = "aldous";
  ctx.seed = args.seed;
  ctx.parameters = {{"f3", args.f3},
                    {"symmetric", args.symmetric},
                    {"seed", args.seed},
                    {"out", args.out}};
  auto f3 = matdist::aldous_catalog(args.f3);
  std::string label = "aldous-" + args.f3;
  if (args.replicas > 0) {
    std::size_t order = args.k ? args.k : args.n;
    ctx.parameters["k"] = order;
    ctx.parameters["replicas"] = args.replicas;
    auto emp = matdist::sample_distribution(
        order, args.replicas, args.seed,
        [&](std::size_t, std::uint64_t replica_seed) {
          return matdist::aldous_sample(f3, order, order, replica_seed,
                                        args.symmetric, label);
        },
        thread_count(args.threads));
    matdist::io::write_distribution(args.out, emp);
    ctx.wrote(fs::path(args.out) / "manifest.json");
    for (std::size_t r = 0; r < emp.replicas(); ++r)
      ctx.wrote(fs::path(args.out) / matdist::io::replica_file_name(r));
    ctx.finish(run_manifest_path(args.out, true));
    std::cout << "wrote " << emp.replicas() << " replicas to " << args.out
              << "\n";
    return kOk;
  }
  std::size_t m_cols = args.m ? args.m : args.n;
  ctx.parameters["n"] = args.n;
  ctx.parameters["m"] = m_cols;
  auto matrix = matdist::aldous_sample(f3, args.n, m_cols, args.seed,
                                       args.symmetric, label);
  matdist::io::write_matrix(args.out, matrix);
  ctx.wrote(args.out);
  ctx.wrote(matdist::io::manifest_path_for(args.out));
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << "wrote " << args.out << "\n";
  return kOk;
}

struct GraphArgs {
  double p = 0.5;
  std::size_t n = 16;
  std::size_t replicas = 0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

int run_graph(const GraphArgs& args) {
  RunContext ctx;
  ctx.command = "graph";
  ctx.seed = args.seed;
  ctx.parameters = {{"p", args.p},
                    {"n", args.n},
                    {"seed", args.seed},
                    {"out", args.out}};
  if (args.replicas > 0) {
    ctx.parameters["replicas"] = args.replicas;
    auto emp = matdist::sample_distribution(
        args.n, args.replicas, args.seed,
        [&](std::size_t, std::uint64_t replica_seed) {
          return matdist::random_graph_matrix(args.p, args.n, replica_seed);
        },
        thread_count(args.threads));
    matdist::io::write_distribution(args.out, emp);
    ctx.wrote(fs::path(args.out) / "manifest.json");
    for (std::size_t r = 0; r < emp.replicas(); ++r)
      ctx.wrote(fs::path(args.out) / matdist::io::replica_file_name(r));
    ctx.finish(run_manifest_path(args.out, true));
    std::cout << "wrote " << emp.replicas() << " replicas to " << args.out
              << "\n";
    return kOk;
  }
  auto matrix = matdist::random_graph_matrix(args.p, args.n, args.seed);
  matdist::io::write_matrix(args.out, matrix);
  ctx.wrote(args.out);
  ctx.wrote(matdist::io::manifest_path_for(args.out));
  ctx.finish(run_manifest_path(args.out, false));
  std::cout << "wrote " << args.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix distributions of measurable functions: sampling, "
               "comparison, recovery, and spectral analysis"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand(
      "sample", "evaluate a kernel on a random grid (matrix or replicas)");
  sample->add_option("--kernel", sample_args.kernel, "kernel id");
  sample->add_option("--grid", sample_args.grid, "grid kind");
  sample->add_option("--n", sample_args.n, "rows");
  sample->add_option("--m", sample_args.m, "columns (default: n)");
  sample->add_option("--seed", sample_args.seed, "seed");
  sample->add_option("--rho", sample_args.rho, "stationary correlation");
  sample->add_option("--circumference", sample_args.circumference,
                     "circle circumference");
  sample->add_option("--table", sample_args.table, "tabulated kernel csv");
  sample->add_option("--jitter", sample_args.jitter,
                     "fixed stratum jitter in [0,1] (test hook)");
  sample->add_option("--replicas", sample_args.replicas,
                     "replica count (distribution mode)");
  sample->add_option("--k", sample_args.k, "matrix order (distribution mode)");
  sample->add_option("--threads", sample_args.threads, "worker cap");
  sample->add_option("--out", sample_args.out, "output csv or directory")
      ->required();

  CompareArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "two-sample test of two replica sets");
  compare->add_option("--a", compare_args.a, "first distribution directory")
      ->required();
  compare->add_option("--b", compare_args.b, "second distribution directory")
      ->required();
  compare->add_option("--q", compare_args.q, "minor order for features");
  compare->add_option("--alpha", compare_args.alpha, "test level");
  compare->add_option("--perms", compare_args.perms, "label permutations");
  compare->add_option("--seed", compare_args.seed, "seed");
  compare->add_option("--out", compare_args.out,
                      "report path (default: print to stdout)");
  compare->add_flag("--assert-accept", compare_args.assert_accept,
                    "exit 3 when the test rejects");

  InvarianceArgs invariance_args;
  CLI::App* invariance = app.add_subcommand(
      "invariance", "permutation-invariance check of a replica set");
  invariance->add_option("--in", invariance_args.in, "distribution directory")
      ->required();
  invariance->add_option("--group", invariance_args.group, "full or diag");
  invariance->add_option("--q", invariance_args.q, "minor order for features");
  invariance->add_option("--alpha", invariance_args.alpha, "test level");
  invariance->add_option("--perms", invariance_args.perms,
                         "label permutations");
  invariance->add_option("--seed", invariance_args.seed, "seed");
  invariance->add_option("--out", invariance_args.out,
                         "report path (default: print to stdout)");
  invariance->add_flag("--assert-accept", invariance_args.assert_accept,
                       "exit 3 when the test rejects");

  RecoverArgs recover_args;
  CLI::App* recover = app.add_subcommand(
      "recover", "invert an additive matrix into its coordinates");
  recover->add_option("--in", recover_args.in, "matrix csv")->required();
  recover->add_option("--out", recover_args.out, "report path");
  recover->add_flag("--validate", recover_args.validate,
                    "KS uniformity check of the recovered coordinates");
  recover->add_option("--alpha", recover_args.alpha, "validation level");
  recover->add_flag("--assert-accept", recover_args.assert_accept,
                    "exit 3 when validation fails");

  FolnerArgs folner_args;
  CLI::App* folner = app.add_subcommand(
      "folner", "window averages over leading square blocks");
  folner->add_option("--in", folner_args.in, "matrix csv")->required();
  folner->add_option("--statistic", folner_args.statistic,
                     "entry-moment-<p>, entry-cos, or pattern-product");
  folner->add_option("--windows", folner_args.windows,
                     "comma list of window sizes");
  folner->add_option("--cap", folner_args.cap, "bounded-transform cap");
  folner->add_option("--out", folner_args.out, "trace csv path")->required();

  EntropyArgs entropy_args;
  CLI::App* entropy = app.add_subcommand(
      "entropy", "epsilon-entropy profile over sample sizes");
  entropy->add_option("--source", entropy_args.source, "kernel or graph");
  entropy->add_option("--kernel", entropy_args.kernel, "metric kernel id");
  entropy->add_option("--p", entropy_args.p, "graph edge probability");
  entropy->add_option("--circumference", entropy_args.circumference,
                      "circle circumference");
  entropy->add_option("--table", entropy_args.table, "tabulated kernel csv");
  entropy->add_option("--eps", entropy_args.eps, "comma list of epsilons");
  entropy->add_option("--n-list", entropy_args.n_list,
                      "comma list of sample sizes");
  entropy->add_option("--seed", entropy_args.seed, "seed");
  entropy->add_option("--out", entropy_args.out, "profile csv path")
      ->required();

  SpectrumArgs spectrum_args;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "eigenvalues of a symmetric matrix");
  spectrum->add_option("--in", spectrum_args.in, "matrix csv")->required();
  spectrum->add_option("--normalization", spectrum_args.normalization,
                       "none, by-n, or by-sqrt-n");
  spectrum->add_flag("--semicircle", spectrum_args.semicircle,
                     "report W1 distance of the bulk to the semicircle law");
  spectrum->add_option("--out", spectrum_args.out, "spectrum csv path")
      ->required();

  DispersionArgs dispersion_args;
  CLI::App* dispersion = app.add_subcommand(
      "dispersion", "replica-to-replica spread of the top eigenvalue");
  dispersion->add_option("--kernel", dispersion_args.kernel,
                         "metric kernel id");
  dispersion->add_option("--circumference", dispersion_args.circumference,
                         "circle circumference");
  dispersion->add_option("--table", dispersion_args.table,
                         "tabulated kernel csv");
  dispersion->add_option("--n", dispersion_args.n, "matrix order");
  dispersion->add_option("--replicas", dispersion_args.replicas,
                         "replica count");
  dispersion->add_option("--seed", dispersion_args.seed, "seed");
  dispersion->add_option("--threads", dispersion_args.threads, "worker cap");
  dispersion->add_option("--out", dispersion_args.out, "report path")
      ->required();

  GridsCompareArgs grids_args;
  CLI::App* grids = app.add_subcommand(
      "grids-compare", "same kernel on two grid kinds, two-sample test");
  grids->add_option("--kernel", grids_args.kernel, "kernel id");
  grids->add_option("--circumference", grids_args.circumference,
                    "circle circumference");
  grids->add_option("--table", grids_args.table, "tabulated kernel csv");
  grids->add_option("--grid-a", grids_args.grid_a, "first grid kind");
  grids->add_option("--grid-b", grids_args.grid_b, "second grid kind");
  grids->add_option("--rho-a", grids_args.rho_a, "stationary rho, first");
  grids->add_option("--rho-b", grids_args.rho_b, "stationary rho, second");
  grids->add_option("--k", grids_args.k, "matrix order");
  grids->add_option("--replicas", grids_args.replicas, "replica count");
  grids->add_option("--q", grids_args.q, "minor order for features");
  grids->add_option("--alpha", grids_args.alpha, "test level");
  grids->add_option("--perms", grids_args.perms, "label permutations");
  grids->add_option("--seed", grids_args.seed, "seed");
  grids->add_option("--threads", grids_args.threads, "worker cap");
  grids->add_option("--out", grids_args.out,
                    "report path (default: print to stdout)");
  grids->add_flag("--assert-accept", grids_args.assert_accept,
                  "exit 3 when the test rejects");

  AldousArgs aldous_args;
  CLI::App* aldous = app.add_subcommand(
      "aldous", "sample an exchangeable array from a three-variable kernel");
  aldous->add_option("--f3", aldous_args.f3,
                     "lambda, xi, or xi-plus-eta-mod1");
  aldous->add_option("--n", aldous_args.n, "rows");
  aldous->add_option("--m", aldous_args.m, "columns (default: n)");
  aldous->add_option("--k", aldous_args.k, "matrix order (distribution mode)");
  aldous->add_option("--replicas", aldous_args.replicas,
                     "replica count (distribution mode)");
  aldous->add_flag("--symmetric", aldous_args.symmetric,
                   "symmetric array (eta = xi, shared lambda)");
  aldous->add_option("--seed", aldous_args.seed, "seed");
  aldous->add_option("--threads", aldous_args.threads, "worker cap");
  aldous->add_option("--out", aldous_args.out, "output csv or directory")
      ->required();

  GraphArgs graph_args;
  CLI::App* graph = app.add_subcommand(
      "graph", "random-graph distance matrix with {1,2} off-diagonal entries");
  graph->add_option("--p", graph_args.p, "edge probability");
  graph->add_option("--n", graph_args.n, "matrix order");
  graph->add_option("--replicas", graph_args.replicas,
                    "replica count (distribution mode)");
  graph->add_option("--seed", graph_args.seed, "seed");
  graph->add_option("--threads", graph_args.threads, "worker cap");
  graph->add_option("--out", graph_args.out, "output csv or directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParamError;
  }

  try {
    if (sample->parsed()) return run_sample(sample_args);
    if (compare->parsed()) return run_compare(compare_args);
    if (invariance->parsed()) return run_invariance(invariance_args);
    if (recover->parsed()) return run_recover(recover_args);
    if (folner->parsed()) return run_folner(folner_args);
    if (entropy->parsed()) return run_entropy(entropy_args);
    if (spectrum->parsed()) return run_spectrum(spectrum_args);
    if (dispersion->parsed()) return run_dispersion(dispersion_args);
    if (grids->parsed()) return run_grids_compare(grids_args);
    if (aldous->parsed()) return run_aldous(aldous_args);
    if (graph->parsed()) return run_graph(graph_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  }
  std::cerr << "error: no subcommand\n";
  return kParamError;
}
