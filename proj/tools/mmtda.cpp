// mmtda: command-line front end for simulation, benchmarking, node reports
// and the small homology demo.

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmtda/bench.hpp"
#include "mmtda/config.hpp"
#include "mmtda/error.hpp"
#include "mmtda/featurize.hpp"
#include "mmtda/homology.hpp"
#include "mmtda/mapper.hpp"
#include "mmtda/ppgen.hpp"

namespace fs = std::filesystem;
using namespace mmtda;

namespace {

constexpr int kUsageError = 2;

// Raised for bad user input that should print usage and exit 2.
struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_simulate(const std::string& processes, std::size_t examples, std::uint64_t seed, const std::string& out) {
  std::vector<ppgen::ClassSpec> classes;
  for (const auto& name : split_list(processes)) {
    const auto kind = ppgen::parse_process(name);
    if (!kind) throw UsageError("unknown process '" + name + "'");
    classes.push_back({ppgen::ProcessSpec::defaults(*kind), examples});
  }
  if (classes.empty()) throw UsageError("--process is empty");
  if (examples == 0) throw UsageError("--n must be >= 1");
  const Dataset data = ppgen::gen_dataset(classes, seed);
  if (out.empty() || out == "-") {
    write_csv(data, std::cout);
  } else {
    save_csv(data, out);
    std::cerr << "wrote " << data.samples.size() << " samples to " << out << '\n';
  }
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const CLI::App& sub,
            std::uint64_t seed, std::size_t threads, bool plot_data) {
  if (!fs::exists(config_path)) throw UsageError("config file '" + config_path + "' not found");
  bench::ExperimentConfig cfg = load_config(config_path);
  if (sub.count("--seed")) cfg.master_seed = seed;
  if (sub.count("--threads")) cfg.threads = threads;
  cfg.validate();
  if (!bench::is_builtin_dataset(cfg.dataset) && !fs::exists(cfg.dataset))
    throw UsageError("dataset '" + cfg.dataset + "' is neither pp2/pp6 nor an existing file");

  fs::create_directories(out_dir);
  const Dataset data = bench::load_experiment_dataset(cfg);
  const auto results = bench::run_experiment(cfg, data);
  const auto summary = bench::aggregate(results);
  bench::write_results_csv(results, fs::path(out_dir) / "results.csv");
  bench::write_summary_csv(summary, fs::path(out_dir) / "summary.csv");
  if (plot_data) bench::write_plot_data(summary, fs::path(out_dir) / "plot_data.csv");

  for (const auto& row : summary) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %-4s k=%-4zu mean=%.4f sd=%.4f runs=%zu\n", row.dataset.c_str(),
                  std::string(bench::model_name(row.model)).c_str(), row.sampling_rate, row.mean_accuracy,
                  row.std_accuracy, row.runs);
    std::cerr << line;
  }
  return 0;
}

int cmd_report(const std::string& data_path, std::size_t datapoints, const std::string& out, std::uint64_t seed,
               const mapper::MapperParams& params, const std::string& standardize, const std::string& graph_json) {
  if (!fs::exists(data_path)) throw UsageError("data file '" + data_path + "' not found");
  const Dataset data = load_csv(data_path);
  bench::ReportOptions opts;
  opts.datapoints = datapoints;
  opts.mapper = params;
  opts.seed = seed;
  if (standardize == "on") opts.standardize = true;
  else if (standardize == "off") opts.standardize = false;
  const auto report = bench::build_report(data, opts);
  write_node_report(report.rows, data.feature_names, out);
  if (!graph_json.empty()) {
    std::ofstream js(graph_json, std::ios::binary);
    if (!js) throw Error("cannot open '" + graph_json + "' for writing");
    js << mapper::graph_to_json(report.graph) << '\n';
  }
  std::cerr << "wrote " << report.rows.size() << " nodes to " << out << '\n';
  return 0;
}

// Plain numeric CSV; a first line that does not parse as numbers is a header.
std::vector<double> read_points(const std::string& path, std::size_t& dim) {
  std::ifstream in(path);
  if (!in) throw UsageError("points file '" + path + "' not found");
  std::vector<double> coords;
  std::string line;
  std::size_t lineno = 0;
  dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& cell : split_list(line)) {
      double v = 0.0;
      const char* b = cell.data();
      while (*b == ' ') ++b;
      const auto [ptr, ec] = std::from_chars(b, cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (coords.empty() && dim == 0) continue;
      throw ParseError(path, lineno, "non-numeric value");
    }
    if (dim == 0) dim = row.size();
    if (row.size() != dim) throw ParseError(path, lineno, "ragged row");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw ParseError(path, 0, "no points");
  return coords;
}

int cmd_homology(const std::string& points, double r) {
  std::size_t dim = 0;
  const auto coords = read_points(points, dim);
  const auto complex = homology::build_vr(coords, dim, r);
  const auto b = homology::betti(complex);
  std::cout << "vertices " << complex.num_vertices << '\n'
            << "edges " << complex.edges.size() << '\n'
            << "triangles " << complex.triangles.size() << '\n'
            << "b0 " << b.b0 << '\n'
            << "b1 " << b.b1 << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mapper-based classifier for repeated-measurement data"};
  app.require_subcommand(1);

  std::string process, sim_out;
  std::size_t sim_n = 100;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Generate a point-process dataset as datapoint CSV");
  simulate->add_option("--process", process, "Process name(s), comma separated: poisson, normal, matern, thomas, "
                                             "baddeley-silverman, ifs")
      ->required();
  simulate->add_option("--n", sim_n, "Examples per process")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV (stdout when omitted)");

  std::string config_path, run_out;
  std::uint64_t run_seed = 1;
  std::size_t threads = 0;
  bool plot_data = false;
  auto* run = app.add_subcommand("run", "Run an accuracy sweep from a config file");
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--seed", run_seed, "Override the config's master seed");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_flag("--plot-data", plot_data, "Also write plot_data.csv in long format");

  std::string data_path, report_out, standardize = "auto", graph_json;
  std::size_t datapoints = 0;
  std::uint64_t report_seed = 1;
  mapper::MapperParams params;
  auto* report = app.add_subcommand("report", "Build one graph over all samples and write the node report");
  report->add_option("--data", data_path, "Datapoint CSV")->required();
  report->add_option("--datapoints", datapoints, "Datapoints sampled per sample (default: smallest sample)");
  report->add_option("--out", report_out, "Report CSV")->required();
  report->add_option("--seed", report_seed, "Random seed")->capture_default_str();
  report->add_option("--n-intervals", params.n_intervals, "Cover intervals")->capture_default_str();
  report->add_option("--overlap", params.overlap, "Interval overlap fraction")->capture_default_str();
  report->add_option("--gap-bins", params.gap_bins, "Histogram bins for the dendrogram cut")->capture_default_str();
  report->add_option("--standardize", standardize, "on, off or auto (auto = on)")
      ->check(CLI::IsMember({"on", "off", "auto"}));
  report->add_option("--graph-json", graph_json, "Also write the mapper graph as JSON");

  std::string points;
  double radius = 0.0;
  auto* homol = app.add_subcommand("homology", "Vietoris-Rips complex and Betti numbers of a point CSV");
  homol->add_option("--points", points, "Numeric CSV, one point per row")->required();
  homol->add_option("--r", radius, "Scale")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == simulate) return cmd_simulate(process, sim_n, sim_seed, sim_out);
    if (active == run) return cmd_run(config_path, run_out, *run, run_seed, threads, plot_data);
    if (active == report) return cmd_report(data_path, datapoints, report_out, report_seed, params, standardize, graph_json);
    if (active == homol) return cmd_homology(points, radius);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsageError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsageError;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
