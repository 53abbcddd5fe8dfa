#include "mmtda/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "mmtda/error.hpp"
#include "mmtda/featurize.hpp"
#include "mmtda/ppgen.hpp"

namespace mmtda::bench {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

struct Cell {
  std::size_t rate;
  std::size_t run;
};

std::vector<RunResult> run_cell(const ExperimentConfig& config, const Dataset& data, const Cell& cell,
                                bool standardize) {
  using Clock = std::chrono::steady_clock;
  std::vector<RunResult> out;
  Rng sample_rng(cell_seed(config.master_seed, SeedStream::Subsample, cell.rate, cell.run));
  const SampledData raw = subsample(data, cell.rate, sample_rng);
  const SampledData sampled = standardize ? mmtda::standardize(raw) : raw;

  for (ModelKind model : config.models) {
    const auto start = Clock::now();
    RunResult r;
    r.dataset = config.dataset;
    r.model = model;
    r.sampling_rate = cell.rate;
    r.run = cell.run;
    if (model == ModelKind::Tda) {
      learn::CvSpec cv = config.cv;
      cv.seed = cell_seed(config.master_seed, SeedStream::Tda, cell.rate, cell.run);
      if (config.strict) {
        r.accuracy = learn::cv_accuracy_tda_strict(sampled, config.mapper, cv, config.logreg, config.normalize_counts)
                         .accuracy;
      } else {
        const auto graph = mapper::build_graph(sampled, config.mapper);
        NodeCountMatrix matrix = node_count_matrix(graph, sampled);
        if (config.normalize_counts) matrix = normalize_by_k(matrix, cell.rate);
        r.accuracy = learn::cv_accuracy_tda(matrix, cv, config.logreg).accuracy;
      }
    } else {
      learn::CvSpec cv = config.cv;
      cv.seed = cell_seed(config.master_seed, SeedStream::Svm, cell.rate, cell.run);
      learn::SvmOptions svm = config.svm;
      svm.seed = cv.seed;
      r.accuracy = learn::cv_accuracy_svm(sampled, cv, svm).accuracy;
    }
    if (config.record_timing) r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string_view model_name(ModelKind m) { return m == ModelKind::Tda ? "tda" : "svm"; }

std::optional<ModelKind> parse_model(std::string_view name) {
  if (name == "tda") return ModelKind::Tda;
  if (name == "svm") return ModelKind::Svm;
  return std::nullopt;
}

bool is_builtin_dataset(std::string_view name) { return name == "pp2" || name == "pp6"; }

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw ParameterError("config: dataset is empty");
  if (sampling_rates.empty()) throw ParameterError("config: sampling_rates is empty");
  for (std::size_t r : sampling_rates)
    if (r == 0) throw ParameterError("config: sampling rates must be positive");
  if (runs == 0) throw ParameterError("config: runs must be >= 1");
  if (models.empty()) throw ParameterError("config: no models selected");
  if (is_builtin_dataset(dataset) && examples_per_class == 0)
    throw ParameterError("config: examples_per_class must be >= 1");
  if (cv.folds < 2) throw ParameterError("config: folds must be >= 2");
  if (!(logreg.l2 >= 0.0) || !(logreg.l1 >= 0.0)) throw ParameterError("config: penalties must be >= 0");
  if (!(svm.C > 0.0)) throw ParameterError("config: svm_c must be > 0");
  mapper.validate();
}

std::uint64_t cell_seed(std::uint64_t master, SeedStream stream, std::size_t rate, std::size_t run) {
  return mix_seed({master, static_cast<std::uint64_t>(stream), rate, run});
}

Dataset load_experiment_dataset(const ExperimentConfig& config) {
  using ppgen::ProcessKind;
  if (!is_builtin_dataset(config.dataset)) return load_csv(config.dataset);
  std::vector<ppgen::ClassSpec> classes;
  if (config.dataset == "pp2") {
    for (ProcessKind k : {ProcessKind::Poisson, ProcessKind::Normal})
      classes.push_back({ppgen::ProcessSpec::defaults(k), config.examples_per_class});
  } else {
    for (ProcessKind k : ppgen::kAllProcesses)
      classes.push_back({ppgen::ProcessSpec::defaults(k), config.examples_per_class});
  }
  return ppgen::gen_dataset(classes, mix_seed({config.master_seed, static_cast<std::uint64_t>(SeedStream::Data)}));
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  data.validate();
  const std::size_t smallest = data.min_sample_size();
  for (std::size_t r : config.sampling_rates)
    if (r > smallest)
      throw ParameterError("config: sampling rate " + std::to_string(r) + " exceeds the smallest sample (" +
                           std::to_string(smallest) + " datapoints)");
  if (data.samples.size() < config.cv.folds)
    throw ParameterError("config: fewer samples than folds");
  const bool standardize = config.standardize.value_or(!is_builtin_dataset(config.dataset));

  std::vector<Cell> cells;
  for (std::size_t rate : config.sampling_rates)
    for (std::size_t run = 0; run < config.runs; ++run) cells.push_back({rate, run});

  std::vector<std::vector<RunResult>> per_cell(cells.size());
  std::size_t workers = config.threads ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        per_cell[i] = run_cell(config, data, cells[i], standardize);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells.size());
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RunResult> results;
  for (auto& v : per_cell)
    for (auto& r : v) results.push_back(std::move(r));
  std::stable_sort(results.begin(), results.end(), [](const RunResult& a, const RunResult& b) {
    return std::tie(a.model, a.sampling_rate, a.run) < std::tie(b.model, b.sampling_rate, b.run);
  });
  return results;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, load_experiment_dataset(config));
}

std::vector<SummaryRow> aggregate(std::span<const RunResult> results) {
  if (results.empty()) throw PreconditionError("aggregate: no results");
  std::map<std::tuple<std::string, ModelKind, std::size_t>, std::vector<double>> groups;
  for (const auto& r : results) groups[{r.dataset, r.model, r.sampling_rate}].push_back(r.accuracy);
  std::vector<SummaryRow> rows;
  for (auto& [key, acc] : groups) {
    // Sorting makes the floating-point sums independent of input order.
    std::sort(acc.begin(), acc.end());
    SummaryRow row;
    std::tie(row.dataset, row.model, row.sampling_rate) = key;
    row.runs = acc.size();
    double sum = 0.0;
    for (double a : acc) sum += a;
    row.mean_accuracy = sum / static_cast<double>(acc.size());
    if (acc.size() > 1) {
      double ss = 0.0;
      for (double a : acc) ss += (a - row.mean_accuracy) * (a - row.mean_accuracy);
      row.std_accuracy = std::sqrt(ss / static_cast<double>(acc.size() - 1));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_results_csv(std::span<const RunResult> results, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "dataset,model,sampling_rate,run,accuracy,wall_time_s\n";
  for (const auto& r : results)
    out << r.dataset << ',' << model_name(r.model) << ',' << r.sampling_rate << ',' << r.run << ','
        << fmt("%.17g", r.accuracy) << ',' << fmt("%.6f", r.wall_time_s) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_summary_csv(std::span<const SummaryRow> rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "dataset,model,sampling_rate,mean_accuracy,std_accuracy,runs\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << model_name(r.model) << ',' << r.sampling_rate << ',' << fmt("%.17g", r.mean_accuracy)
        << ',' << fmt("%.17g", r.std_accuracy) << ',' << r.runs << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_plot_data(std::span<const SummaryRow> rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "dataset,model,sampling_rate,statistic,value\n";
  for (const auto& r : rows) {
    const std::string prefix = r.dataset + "," + std::string(model_name(r.model)) + "," +
                               std::to_string(r.sampling_rate) + ",";
    out << prefix << "mean_accuracy," << fmt("%.17g", r.mean_accuracy) << '\n';
    out << prefix << "std_accuracy," << fmt("%.17g", r.std_accuracy) << '\n';
    out << prefix << "runs," << r.runs << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

ReportResult build_report(const Dataset& data, const ReportOptions& options) {
  data.validate();
  options.mapper.validate();
  const std::size_t k = options.datapoints ? options.datapoints : data.min_sample_size();
  Rng rng(mix_seed({options.seed, static_cast<std::uint64_t>(SeedStream::Subsample)}));
  const SampledData raw = subsample(data, k, rng);
  const bool standardize = options.standardize.value_or(true);
  ReportResult out;
  out.graph = mapper::build_graph(standardize ? mmtda::standardize(raw) : raw, options.mapper);
  out.rows = node_report(out.graph, raw);
  return out;
}

}  // namespace mmtda::bench
