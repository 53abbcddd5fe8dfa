// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. `--only N[,M...]` restricts the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "mmtda/bench.hpp"
#include "mmtda/homology.hpp"
#include "mmtda/learn.hpp"
#include "mmtda/mapper.hpp"
#include "mmtda/ppgen.hpp"
#include "oracles.hpp"

using namespace mmtda;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean_at(std::span<const bench::SummaryRow> rows, bench::ModelKind model, std::size_t rate) {
  for (const auto& r : rows)
    if (r.model == model && r.sampling_rate == rate) return r.mean_accuracy;
  return std::nan("");
}

struct Sweep {
  std::vector<bench::SummaryRow> summary;
  double seconds = 0.0;
};

Sweep sweep(const bench::ExperimentConfig& cfg, const Dataset& data) {
  const auto t0 = Clock::now();
  const auto results = bench::run_experiment(cfg, data);
  Sweep s;
  s.seconds = seconds_since(t0);
  s.summary = bench::aggregate(results);
  return s;
}

bench::ExperimentConfig benchmark_config(const std::string& dataset, std::vector<std::size_t> rates,
                                         std::size_t runs, bench::ModelKind model) {
  bench::ExperimentConfig cfg;
  cfg.dataset = dataset;
  cfg.examples_per_class = 100;
  cfg.sampling_rates = std::move(rates);
  cfg.runs = runs;
  cfg.models = {model};
  cfg.master_seed = 1;
  return cfg;
}

// Criteria 1 and 4 share the two-class sweep.
struct TwoClass {
  Sweep tda;
  bool done = false;
};

TwoClass& two_class() {
  static TwoClass tc;
  if (!tc.done) {
    const auto cfg = benchmark_config("pp2", {10, 30, 100}, 10, bench::ModelKind::Tda);
    tc.tda = sweep(cfg, bench::load_experiment_dataset(cfg));
    tc.done = true;
  }
  return tc;
}

// Criteria 2 and 3 share the six-class sweep. Both models see the same
// subsamples because the subsample stream does not depend on the model.
struct SixClass {
  Sweep tda, svm;
  bool done = false;
};

SixClass& six_class() {
  static SixClass sc;
  if (!sc.done) {
    const auto tda_cfg = benchmark_config("pp6", {10, 100}, 3, bench::ModelKind::Tda);
    const Dataset data = bench::load_experiment_dataset(tda_cfg);
    sc.tda = sweep(tda_cfg, data);
    auto svm_cfg = tda_cfg;
    svm_cfg.models = {bench::ModelKind::Svm};
    svm_cfg.svm.kernel = learn::KernelKind::Rbf;
    sc.svm = sweep(svm_cfg, data);
    sc.done = true;
  }
  return sc;
}

Outcome two_class_accuracy() {
  const auto& s = two_class().tda;
  const double k30 = mean_at(s.summary, bench::ModelKind::Tda, 30);
  const double k100 = mean_at(s.summary, bench::ModelKind::Tda, 100);
  return {k30 >= 0.97 && k100 >= 0.98 && s.seconds <= 300.0,
          fmt("10 runs: k=30 mean %.4f (>= 0.97), k=100 mean %.4f (>= 0.98), %.1f s (<= 300 s)", k30, k100,
              s.seconds)};
}

Outcome six_class_accuracy() {
  const auto& s = six_class().tda;
  const double k10 = mean_at(s.summary, bench::ModelKind::Tda, 10);
  const double k100 = mean_at(s.summary, bench::ModelKind::Tda, 100);
  return {k100 >= 0.90 && k10 >= 0.45 && k10 > 1.0 / 6.0 && s.seconds <= 900.0,
          fmt("3 runs: k=100 mean %.4f (>= 0.90), k=10 mean %.4f (>= 0.45, > 1/6), %.1f s (<= 900 s)", k100, k10,
              s.seconds)};
}

Outcome baseline_separation() {
  const auto& sc = six_class();
  const double tda = mean_at(sc.tda.summary, bench::ModelKind::Tda, 100);
  const double svm = mean_at(sc.svm.summary, bench::ModelKind::Svm, 100);
  return {tda > svm, fmt("k=100: tda mean %.4f > rbf svm mean %.4f", tda, svm)};
}

Outcome monotone_signal() {
  const auto& s = two_class().tda;
  const double k10 = mean_at(s.summary, bench::ModelKind::Tda, 10);
  const double k100 = mean_at(s.summary, bench::ModelKind::Tda, 100);
  return {k100 >= k10, fmt("two-class tda: k=100 mean %.4f >= k=10 mean %.4f", k100, k10)};
}

Outcome homology_exactness() {
  const auto t0 = Clock::now();
  const auto fig = homology::betti(homology::loop_and_triangle_complex());
  bool ok = fig == homology::Betti{1, 1};
  std::size_t boundary_ok = 0, b0_ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 1 + seed % 15;
    const auto pts = oracle::random_cloud(n, 2, seed * 31 + 7);
    const double r = 0.1 + 0.4 * static_cast<double>(seed % 10) / 10.0;
    const auto c = homology::build_vr(pts, 2, r);
    boundary_ok += (homology::boundary_matrix(c, 1) * homology::boundary_matrix(c, 2)).is_zero();
    b0_ok += homology::betti(c).b0 == oracle::component_count(n, c.edges);
  }
  const double secs = seconds_since(t0);
  ok = ok && boundary_ok == 100 && b0_ok == 100 && secs <= 10.0;
  return {ok, fmt("figure complex (b0,b1)=(%zu,%zu); d1*d2=0 on %zu/100; b0 = union-find on %zu/100; %.2f s",
                  fig.b0, fig.b1, boundary_ok, b0_ok, secs)};
}

Outcome oracle_suites() {
  std::size_t linkage_ok = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % 40;
    const std::size_t dim = 1 + seed % 3;
    const auto pts = oracle::random_cloud(n, dim, seed + 90000);
    const auto got = mapper::complete_linkage(pts, dim);
    const auto want = oracle::complete_linkage(pts, dim);
    bool same = got.size() == want.size();
    for (std::size_t s = 0; same && s < got.size(); ++s)
      same = got[s].a == want[s].a && got[s].b == want[s].b && got[s].size == want[s].size &&
             std::abs(got[s].height - want[s].height) <= 1e-12 * std::max(1.0, want[s].height);
    linkage_ok += same;
  }

  std::size_t grad_ok = 0;
  double worst_grad = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(mix_seed({seed, 77}));
    const std::size_t n = 5, m = 4, C = 2 + seed % 4;
    std::vector<double> x(n * m), w(C * (m + 1));
    std::vector<int> y(n);
    for (double& v : x) v = rng.normal(0.0, 2.0);
    for (double& v : w) v = rng.normal();
    for (auto& l : y) l = static_cast<int>(rng.below(C));
    const double l2 = rng.uniform(0.0, 2.0);
    const learn::MatrixView X{x, n, m};
    std::vector<double> grad(w.size());
    learn::logreg_gradient(X, y, C, w, l2, grad);
    const auto fd = oracle::central_difference(
        [&](std::span<const double> v) { return learn::logreg_objective(X, y, C, v, l2); }, w, 1e-5);
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      diff += (grad[i] - fd[i]) * (grad[i] - fd[i]);
      norm += grad[i] * grad[i];
    }
    const double rel = std::sqrt(diff) / std::max(std::sqrt(norm), 1.0);
    worst_grad = std::max(worst_grad, rel);
    grad_ok += rel < 1e-6;
  }

  std::size_t pca_ok = 0;
  double worst_pca = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto pts = oracle::random_cloud(50, 3, seed + 4000);
    for (std::size_t i = 0; i < 50; ++i) pts[i * 3 + seed % 3] *= 2.5;
    const auto got = mapper::pca_filter(pts, 3);
    const auto want = oracle::pca_projection(pts, 3);
    const double sign = got[0] * want[0] < 0 ? -1.0 : 1.0;
    double err = 0.0;
    for (std::size_t i = 0; i < 50; ++i) err = std::max(err, std::abs(got[i] - sign * want[i]));
    worst_pca = std::max(worst_pca, err);
    pca_ok += err <= 1e-8;
  }
  return {linkage_ok == 200 && grad_ok == 50 && pca_ok == 20,
          fmt("linkage %zu/200; gradient %zu/50 (worst rel err %.2e); pca %zu/20 (worst abs err %.2e)", linkage_ok,
              grad_ok, worst_grad, pca_ok, worst_pca)};
}

Outcome generator_calibration() {
  constexpr std::size_t kRuns = 500;
  bool ok = true;
  std::string detail;
  for (auto kind : ppgen::kAllProcesses) {
    const auto spec = ppgen::ProcessSpec::defaults(kind);
    double expected = spec.lambda;
    if (kind == ppgen::ProcessKind::Matern || kind == ppgen::ProcessKind::Thomas) expected = spec.kappa * spec.mu;
    if (kind == ppgen::ProcessKind::BaddeleySilverman) {
      const double tiles = std::round(1.0 / spec.tile_side);
      expected = tiles * tiles * (8.0 / 9.0 + 10.0 / 90.0);
    }
    std::vector<double> counts;
    for (std::size_t r = 0; r < kRuns; ++r) {
      Rng rng(mix_seed({0xca11b, static_cast<std::uint64_t>(kind), r}));
      counts.push_back(static_cast<double>(ppgen::generate(spec, rng).size()));
    }
    double mean = 0.0, var = 0.0;
    for (double c : counts) mean += c / kRuns;
    for (double c : counts) var += (c - mean) * (c - mean) / (kRuns - 1);
    const double se = std::sqrt(var / kRuns);
    const bool pass = std::abs(mean - expected) <= 3.0 * se;
    ok = ok && pass;
    detail += fmt("%s%s %.1f vs %.0f (3se %.2f)", detail.empty() ? "" : "; ",
                  std::string(ppgen::process_name(kind)).c_str(), mean, expected, 3.0 * se);
  }
  return {ok, detail};
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("mmtda_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "det.cfg");
    cfg << "dataset = pp6\nexamples_per_class = 12\nsampling_rates = 10, 20\nruns = 2\nmodels = tda, svm\n";
  }
  auto run_once = [&](const std::string& out) {
    const std::string cmd = std::string(MMTDA_CLI) + " run --config " + (dir / "det.cfg").string() + " --seed 5 --out " +
                            (dir / out).string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(dir / out / "results.csv", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::make_pair(WIFEXITED(status) && WEXITSTATUS(status) == 0, ss.str());
  };
  const auto a = run_once("a");
  const auto b = run_once("b");
  fs::remove_all(dir);
  const bool ok = a.first && b.first && !a.second.empty() && a.second == b.second;
  return {ok, fmt("two `mmtda run` executions: exit ok %d/%d, %zu vs %zu bytes, identical=%d", a.first, b.first,
                  a.second.size(), b.second.size(), a.second == b.second)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--only") {
      std::stringstream ss(argv[i + 1]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"two-class benchmark accuracy", two_class_accuracy},
      {"six-class benchmark accuracy", six_class_accuracy},
      {"tda beats the svm voting baseline", baseline_separation},
      {"accuracy grows with sampling rate", monotone_signal},
      {"homology exactness", homology_exactness},
      {"oracle suites", oracle_suites},
      {"generator calibration", generator_calibration},
      {"cli determinism", cli_determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
