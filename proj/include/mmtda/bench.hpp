#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmtda/dataio.hpp"
#include "mmtda/featurize.hpp"
#include "mmtda/learn.hpp"
#include "mmtda/mapper.hpp"

namespace mmtda::bench {

enum class ModelKind { Tda, Svm };

std::string_view model_name(ModelKind m);
std::optional<ModelKind> parse_model(std::string_view name);

/// Built-in point-process benchmarks: "pp2" (poisson, normal) and "pp6"
/// (all six processes). Anything else is read as a CSV path.
bool is_builtin_dataset(std::string_view name);

struct ExperimentConfig {
  std::string dataset = "pp6";
  std::size_t examples_per_class = 100;  // built-in datasets only
  std::vector<std::size_t> sampling_rates = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::size_t runs = 10;
  std::vector<ModelKind> models = {ModelKind::Tda, ModelKind::Svm};
  mapper::MapperParams mapper;
  learn::CvSpec cv;
  learn::LogRegOptions logreg;
  learn::SvmOptions svm;
  bool normalize_counts = false;
  /// Rebuild the graph per fold (no test datapoints in node construction).
  bool strict = false;
  /// Unset: on for CSV data, off for built-in point processes.
  std::optional<bool> standardize;
  std::uint64_t master_seed = 1;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 0;
  /// Record measured wall time in the results; off keeps output byte-stable.
  bool record_timing = false;

  /// Throws ParameterError on an invalid combination (before any work).
  void validate() const;
};

struct RunResult {
  std::string dataset;
  ModelKind model = ModelKind::Tda;
  std::size_t sampling_rate = 0;
  std::size_t run = 0;
  double accuracy = 0.0;
  double wall_time_s = 0.0;
};

struct SummaryRow {
  std::string dataset;
  ModelKind model = ModelKind::Tda;
  std::size_t sampling_rate = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::size_t runs = 0;
};

enum class SeedStream : std::uint64_t { Data = 0x64617461, Subsample = 0x73616d70, Tda = 0x74646100, Svm = 0x73766d00 };

/// Seed for one stream of one (rate, run) cell: mix_seed of the master seed,
/// the stream tag, the rate and the run index.
std::uint64_t cell_seed(std::uint64_t master, SeedStream stream, std::size_t rate, std::size_t run);

/// Builds the configured dataset (generated from the master seed, or loaded).
Dataset load_experiment_dataset(const ExperimentConfig& config);

/// Runs every (rate, run) cell and returns results ordered by
/// (model, rate, run) regardless of thread scheduling.
std::vector<RunResult> run_experiment(const ExperimentConfig& config, const Dataset& data);
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

/// Mean and sample standard deviation per (dataset, model, rate). One run
/// reports std 0. Output is sorted by (dataset, model, rate).
std::vector<SummaryRow> aggregate(std::span<const RunResult> results);

void write_results_csv(std::span<const RunResult> results, const std::filesystem::path& path);
void write_summary_csv(std::span<const SummaryRow> rows, const std::filesystem::path& path);
/// Long format: dataset,model,sampling_rate,statistic,value.
void write_plot_data(std::span<const SummaryRow> rows, const std::filesystem::path& path);

/// Node report for one sampled run over the whole dataset.
struct ReportOptions {
  std::size_t datapoints = 0;
  mapper::MapperParams mapper;
  std::optional<bool> standardize;
  std::uint64_t seed = 1;
};

struct ReportResult {
  mapper::MapperGraph graph;
  std::vector<NodeReportRow> rows;
};

/// Subsamples `datapoints` per sample, builds the graph (on standardized
/// features when enabled) and reports node means in raw feature units.
ReportResult build_report(const Dataset& data, const ReportOptions& options);

}  // namespace mmtda::bench
