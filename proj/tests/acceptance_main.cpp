// Acceptance harness: one line per criterion, nonzero exit when any fails.
// Runs the library end to end with fixed seeds plus the CLI reproducibility
// sweep; runtime limits are part of the criteria and are enforced.

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "matdist/matdist.hpp"

using namespace matdist;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> top_by_magnitude(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  v.resize(k);
  return v;
}

SampleMatrix interval_symmetric_matrix(std::size_t n, std::uint64_t seed) {
  auto kernel = KernelSpec::builtin(KernelId::kIntervalEuclid);
  return evaluate_matrix(
      kernel, sample_symmetric_grid(MeasureSpaceSpec::unit_interval(), n,
                                    seed));
}

// ---------------------------------------------------------------------------
// 1. Additive recovery: add-mod1 matrices invert to their coordinates.

bool criterion_recovery() {
  auto add = KernelSpec::builtin(KernelId::kAddMod1);
  int residual_ok = 0, ks_ok = 0;
  double worst_run = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto t0 = Clock::now();
    GridSample g = sample_bernoulli_grid(MeasureSpaceSpec::unit_interval(),
                                         MeasureSpaceSpec::unit_interval(),
                                         256, 256, seed);
    auto result = recover_additive(evaluate_matrix(add, g));
    auto validation =
        validate_recovery(result, MeasureSpaceSpec::unit_interval());
    worst_run = std::max(worst_run, seconds_since(t0));
    if (result.residual_max <= 1e-9) ++residual_ok;
    if (validation.p_value_x >= 0.01 && validation.p_value_y >= 0.01) ++ks_ok;
  }
  if (residual_ok != 20 || ks_ok < 18 || worst_run >= 1.0) {
    std::printf("  detail: residual_ok=%d/20 ks_ok=%d/20 worst_run=%.3fs\n",
                residual_ok, ks_ok, worst_run);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Exchangeability: permuted replicas are indistinguishable from the
// originals under the sorted-minor features.

bool criterion_exchangeability() {
  auto interval = KernelSpec::builtin(KernelId::kIntervalEuclid);
  int accepts = 0;
  double worst_trial = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto emp = sample_matrix_distribution(interval, GridRequest::bernoulli(),
                                          16, 200, 1000 + trial);
    auto t0 = Clock::now();
    auto report = invariance_check(emp, PermutationGroup::kFull, 8, 0.05, 199,
                                   2000 + trial);
    worst_trial = std::max(worst_trial, seconds_since(t0));
    if (report.decision == TestDecision::kAccept) ++accepts;
  }
  auto emp = sample_matrix_distribution(interval, GridRequest::bernoulli(), 16,
                                        50, 1234);
  auto full_q =
      invariance_check(emp, PermutationGroup::kFull, 16, 0.05, 199, 4321);
  if (accepts < 18 || full_q.statistic != 0.0 || worst_trial >= 10.0) {
    std::printf("  detail: accepts=%d/20 full_q_statistic=%g worst=%.2fs\n",
                accepts, full_q.statistic, worst_trial);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Discrimination: the single-entry laws separate interval-euclid from
// circle-metric; same-kernel pairs pass. Laws confirmed by quadrature first.

bool criterion_discrimination() {
  // P(|U - V| <= t) = 2t - t^2 and P(circle distance <= t) = 2t on [0, 1/2],
  // both by 2D midpoint quadrature.
  const int nq = 500;
  for (double t : {0.1, 0.25, 0.4, 0.6, 0.9}) {
    int hits = 0;
    for (int a = 0; a < nq; ++a)
      for (int b = 0; b < nq; ++b)
        if (std::abs((a + 0.5) / nq - (b + 0.5) / nq) <= t) ++hits;
    double law = double(hits) / (double(nq) * nq);
    if (std::abs(law - (2 * t - t * t)) > 0.01) {
      std::printf("  detail: interval law mismatch at t=%g (%g)\n", t, law);
      return false;
    }
  }
  for (double t : {0.1, 0.25, 0.45}) {
    int hits = 0;
    for (int a = 0; a < nq; ++a)
      for (int b = 0; b < nq; ++b) {
        double d = std::abs((a + 0.5) / nq - (b + 0.5) / nq);
        if (std::min(d, 1.0 - d) <= t) ++hits;
      }
    double law = double(hits) / (double(nq) * nq);
    if (std::abs(law - 2 * t) > 0.01) {
      std::printf("  detail: circle law mismatch at t=%g (%g)\n", t, law);
      return false;
    }
  }

  auto interval = KernelSpec::builtin(KernelId::kIntervalEuclid);
  auto circle = KernelSpec::builtin(KernelId::kCircleMetric);
  int rejects = 0, accepts = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto a = sample_matrix_distribution(interval, GridRequest::bernoulli(), 8,
                                        400, 3000 + 3 * trial);
    auto b = sample_matrix_distribution(circle, GridRequest::bernoulli(), 8,
                                        400, 3001 + 3 * trial);
    auto c = sample_matrix_distribution(interval, GridRequest::bernoulli(), 8,
                                        400, 3002 + 3 * trial);
    auto diff = compare_distributions(a, b, 1, 0.01, 999, 5000 + trial);
    auto same = compare_distributions(a, c, 1, 0.05, 999, 6000 + trial);
    if (diff.p_value <= 0.01) ++rejects;
    if (same.decision == TestDecision::kAccept) ++accepts;
  }
  if (rejects != 20 || accepts < 18) {
    std::printf("  detail: rejects=%d/20 accepts=%d/20\n", rejects, accepts);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. mm-entropy: unit-interval covering counts hit the analytic values; the
// random-graph source scales linearly with n.

bool criterion_entropy() {
  auto t0 = Clock::now();
  int joint_ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SampleMatrix m = interval_symmetric_matrix(2000, seed);
    std::size_t h25 = mm_entropy(m, 0.25);
    std::size_t h10 = mm_entropy(m, 0.1);
    if (h25 == 2 && h10 >= 4 && h10 <= 6) ++joint_ok;
  }
  std::size_t g100 = mm_entropy(random_graph_matrix(0.5, 100, 77), 0.5);
  std::size_t g400 = mm_entropy(random_graph_matrix(0.5, 400, 78), 0.5);
  double elapsed = seconds_since(t0);
  if (joint_ok < 16 || g100 < 25 || g400 < 100 || g400 <= g100 ||
      elapsed >= 5.0) {
    std::printf("  detail: joint_ok=%d/20 g100=%zu g400=%zu elapsed=%.2fs\n",
                joint_ok, g100, g400, elapsed);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Deterministic limit spectrum: by-n eigenvalues converge to the |x-y|
// integral operator (2048-point Nystrom oracle) and the top eigenvalue
// concentrates across seeds.

bool criterion_deterministic_spectrum() {
  auto t0 = Clock::now();
  const int nq = 2048;
  Eigen::MatrixXd k(nq, nq);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j)
      k(i, j) = std::abs((i + 0.5) / nq - (j + 0.5) / nq) / nq;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      k, Eigen::EigenvaluesOnly);
  std::vector<double> oracle(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + nq);
  auto oracle_top = top_by_magnitude(oracle, 3);

  auto sample = spectrum(interval_symmetric_matrix(1024, 424242),
                         SpectrumNormalization::kByN);
  auto sample_top = top_by_magnitude(sample.eigenvalues, 3);
  double band = 0.03 * std::abs(oracle_top[0]);
  bool close = true;
  for (std::size_t i = 0; i < 3; ++i)
    close = close && std::abs(sample_top[i] - oracle_top[i]) <= band;

  auto dispersion = spectral_dispersion(
      KernelSpec::builtin(KernelId::kIntervalEuclid), 512, 20, 515151);
  double elapsed = seconds_since(t0);
  if (!close || dispersion.cv > 0.05 || elapsed >= 60.0) {
    std::printf(
        "  detail: oracle=(%.5f,%.5f,%.5f) sample=(%.5f,%.5f,%.5f) cv=%.4f "
        "elapsed=%.1fs\n",
        oracle_top[0], oracle_top[1], oracle_top[2], sample_top[0],
        sample_top[1], sample_top[2], dispersion.cv);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Random limit spectrum: Cauchy half-line dispersion stays bounded away
// from zero as n grows.

bool criterion_random_spectrum() {
  auto cauchy = KernelSpec::builtin(KernelId::kHalflineCauchyEuclid);
  double cv512 = spectral_dispersion(cauchy, 512, 20, 616161).cv;
  double cv1024 = spectral_dispersion(cauchy, 1024, 20, 626262).cv;
  if (cv512 < 0.2 || cv1024 < 0.2 || cv512 > 1.5 * cv1024) {
    std::printf("  detail: cv512=%.3f cv1024=%.3f\n", cv512, cv1024);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. Triangle inequality: exhaustive triples for every metric kernel.
// Comparisons allow 1e-12 relative slack: the real-valued inequality is
// exact, but each matrix entry and each sum is separately rounded.

bool criterion_triangle() {
  const std::size_t n = 64;
  std::size_t violations = 0;
  for (auto id :
       {KernelId::kIntervalEuclid, KernelId::kCircleMetric,
        KernelId::kSphereGeodesic, KernelId::kHalflineCauchyEuclid}) {
    auto kernel = KernelSpec::builtin(id);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto m = evaluate_matrix(
          kernel, sample_symmetric_grid(kernel.space_x, n, seed));
      for (std::size_t i = 0; i < n && violations == 0; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (std::size_t l = j + 1; l < n; ++l) {
            double ij = m.at(i, j), jl = m.at(j, l), il = m.at(i, l);
            double slack =
                1e-12 * std::max({1.0, ij, jl, il});
            if (il > ij + jl + slack || ij > il + jl + slack ||
                jl > ij + il + slack)
              ++violations;
          }
      if (violations) {
        std::printf("  detail: violation for %s at seed %llu\n",
                    std::string(to_string(id)).c_str(),
                    static_cast<unsigned long long>(seed));
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Aldous zero-lambda correspondence: (xi + eta) mod 1 arrays match the
// add-mod1 matrix distribution.

bool criterion_aldous() {
  auto f3 = aldous_catalog("xi-plus-eta-mod1");
  auto add = KernelSpec::builtin(KernelId::kAddMod1);
  int accepts = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto a = sample_distribution(
        8, 400, 8100 + 2 * trial, [&](std::size_t, std::uint64_t seed) {
          return aldous_sample(f3, 8, 8, seed, false, "aldous");
        });
    auto b = sample_matrix_distribution(add, GridRequest::bernoulli(), 8, 400,
                                        8101 + 2 * trial);
    auto report = compare_distributions(a, b, 4, 0.05, 199, 9100 + trial);
    if (report.decision == TestDecision::kAccept) ++accepts;
  }
  if (accepts < 18) {
    std::printf("  detail: accepts=%d/20\n", accepts);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. Folner-average identification: block averages land on the product-law
// expectations and agree between independent matrices.

bool criterion_folner() {
  const std::vector<std::size_t> windows{32, 64, 128, 256};
  auto interval = KernelSpec::builtin(KernelId::kIntervalEuclid);
  auto add = KernelSpec::builtin(KernelId::kAddMod1);
  auto grid = [&](std::uint64_t seed) {
    return sample_bernoulli_grid(MeasureSpaceSpec::unit_interval(),
                                 MeasureSpaceSpec::unit_interval(), 256, 256,
                                 seed);
  };

  auto moment = folner_average(evaluate_matrix(interval, grid(901)),
                               "entry-moment-1", windows);
  bool moment_ok = std::abs(moment.averages.back() - 1.0 / 3.0) <= 0.02;

  auto cosine = folner_average(evaluate_matrix(add, grid(902)), "entry-cos",
                               windows);
  bool cos_ok = std::abs(cosine.averages.back()) <= 0.05;

  auto ta = folner_average(evaluate_matrix(interval, grid(903)),
                           "entry-moment-1", windows);
  auto tb = folner_average(evaluate_matrix(interval, grid(904)),
                           "entry-moment-1", windows);
  bool agree = true;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    double band = 2.0 * 4.0 / std::sqrt(double(windows[i]));
    agree = agree && std::abs(ta.averages[i] - tb.averages[i]) <= band;
  }
  if (!moment_ok || !cos_ok || !agree) {
    std::printf("  detail: moment=%.4f cos=%.4f agree=%d\n",
                moment.averages.back(), cosine.averages.back(), int(agree));
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 10. Reproducibility: the full subcommand matrix rerun with the same seeds
// yields byte-identical outputs (run manifests carry wall-clock durations
// and are the only files excluded).

int cli(const std::string& args) {
  std::string cmd =
      std::string(MATDIST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

bool run_matrix_into(const fs::path& dir) {
  auto p = [&](const char* name) { return (dir / name).string(); };
  std::vector<std::string> commands{
      "sample --kernel add-mod1 --grid bernoulli --n 16 --m 16 --seed 7 "
      "--out " + p("m.csv"),
      "sample --kernel interval-euclid --grid symmetric --n 32 --m 32 "
      "--seed 41 --out " + p("s.csv"),
      "sample --kernel circle-metric --grid locally-finite --n 12 --m 12 "
      "--seed 8 --circumference 2.0 --out " + p("c.csv"),
      "sample --kernel halfline-cauchy-euclid --grid stationary --rho 0.5 "
      "--n 12 --m 12 --seed 9 --out " + p("h.csv"),
      "sample --kernel interval-euclid --grid bernoulli --k 4 --replicas 30 "
      "--seed 21 --out " + p("distA"),
      "sample --kernel interval-euclid --grid bernoulli --k 4 --replicas 30 "
      "--seed 22 --out " + p("distB"),
      "sample --kernel interval-euclid --grid symmetric --k 6 --replicas 30 "
      "--seed 31 --out " + p("sym"),
      "compare --a " + p("distA") + " --b " + p("distB") +
          " --q 2 --alpha 0.05 --perms 199 --seed 5 --out " + p("cmp.json"),
      "invariance --in " + p("sym") +
          " --group diag --q 3 --alpha 0.05 --perms 199 --seed 6 --out " +
          p("inv.json"),
      "recover --in " + p("m.csv") + " --validate --out " + p("rec.json"),
      "folner --in " + p("m.csv") +
          " --statistic entry-moment-1 --windows 4,8,16 --out " +
          p("trace.csv"),
      "entropy --source kernel --kernel interval-euclid --eps 0.25,0.1 "
      "--n-list 100,200 --seed 5 --out " + p("prof.csv"),
      "entropy --source graph --p 0.5 --eps 0.5 --n-list 50,100 --seed 6 "
      "--out " + p("gprof.csv"),
      "spectrum --in " + p("s.csv") +
          " --normalization by-n --semicircle --out " + p("spec.csv"),
      "dispersion --kernel interval-euclid --n 32 --replicas 5 --seed 6 "
      "--out " + p("disp.json"),
      "grids-compare --kernel interval-euclid --grid-a bernoulli --grid-b "
      "locally-finite --k 4 --replicas 40 --q 2 --alpha 0.05 --perms 199 "
      "--seed 9 --out " + p("gc.json"),
      "aldous --f3 xi-plus-eta-mod1 --n 8 --m 8 --seed 3 --out " +
          p("a.csv"),
      "aldous --f3 lambda --k 4 --replicas 10 --symmetric --seed 3 --out " +
          p("adist"),
      "graph --p 0.5 --n 16 --seed 4 --out " + p("g.csv"),
      "graph --p 0.5 --n 6 --replicas 8 --seed 5 --out " + p("gdist"),
  };
  for (const std::string& c : commands) {
    if (cli(c) != 0) {
      std::printf("  detail: command failed: %s\n", c.c_str());
      return false;
    }
  }
  return true;
}

bool criterion_reproducibility() {
  // Same invocations, same paths, run twice; everything except the run
  // manifests (wall-clock durations) must come back byte-identical.
  fs::path root = fs::temp_directory_path() / "matdist_acceptance";
  fs::remove_all(root);
  fs::path work = root / "work";
  fs::create_directories(work);
  if (!run_matrix_into(work)) return false;

  std::map<std::string, std::string> snapshot;
  for (auto const& entry : fs::recursive_directory_iterator(work)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().ends_with("run.json")) continue;
    snapshot[fs::relative(entry.path(), work).string()] =
        io::read_text(entry.path());
  }

  fs::remove_all(work);
  fs::create_directories(work);
  if (!run_matrix_into(work)) return false;

  std::size_t compared = 0;
  for (auto const& [rel, content] : snapshot) {
    fs::path other = work / rel;
    if (!fs::exists(other)) {
      std::printf("  detail: missing on rerun: %s\n", rel.c_str());
      return false;
    }
    if (io::read_text(other) != content) {
      std::printf("  detail: rerun differs: %s\n", rel.c_str());
      return false;
    }
    ++compared;
  }
  if (compared < 30) {
    std::printf("  detail: only %zu files compared\n", compared);
    return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool()> run;
  };
  std::vector<Criterion> criteria{
      {1, "additive recovery", criterion_recovery},
      {2, "exchangeability", criterion_exchangeability},
      {3, "discrimination", criterion_discrimination},
      {4, "mm-entropy", criterion_entropy},
      {5, "deterministic limit spectrum", criterion_deterministic_spectrum},
      {6, "random limit spectrum", criterion_random_spectrum},
      {7, "triangle inequality", criterion_triangle},
      {8, "aldous zero-lambda correspondence", criterion_aldous},
      {9, "folner-average identification", criterion_folner},
      {10, "reproducibility", criterion_reproducibility},
  };
  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = Clock::now();
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("  detail: exception: %s\n", e.what());
    }
    std::printf("%s criterion %2d (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", c.id,
                c.name, seconds_since(t0));
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
