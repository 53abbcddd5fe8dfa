#include "mmtda/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mmtda/error.hpp"

namespace mmtda {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

class LineParser {
 public:
  LineParser(const std::string& source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  std::uint64_t u64(std::string_view v, std::string_view key) const {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
      fail("'" + std::string(key) + "' expects a nonnegative integer, got '" + std::string(v) + "'");
    return out;
  }
  std::size_t size(std::string_view v, std::string_view key) const { return static_cast<std::size_t>(u64(v, key)); }
  double real(std::string_view v, std::string_view key) const {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
      fail("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    return out;
  }
  bool boolean(std::string_view v, std::string_view key) const {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail("'" + std::string(key) + "' expects true/false, got '" + std::string(v) + "'");
  }
  std::vector<std::string_view> list(std::string_view v) const {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = v.find(',', start);
      const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
      if (!item.empty()) out.push_back(item);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dataset",  "examples_per_class", "sampling_rates", "runs",          "models",     "n_intervals",
      "overlap",  "gap_bins",           "folds",          "stratified",    "l2",         "l1",
      "logreg_iters", "svm_kernel",     "svm_c",          "svm_gamma",     "svm_epochs", "svm_sweeps",
      "svm_max_train", "normalize_counts", "strict",      "standardize",   "seed",       "threads",
      "timing"};
  return keys;
}

bench::ExperimentConfig parse_config(const std::string& text, const std::string& source,
                                     bench::ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const LineParser p(source, lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail("expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("missing key before '='");
    if (value.empty()) p.fail("missing value for '" + std::string(key) + "'");

    if (key == "dataset") {
      cfg.dataset = std::string(value);
    } else if (key == "examples_per_class") {
      cfg.examples_per_class = p.size(value, key);
    } else if (key == "sampling_rates") {
      cfg.sampling_rates.clear();
      for (auto item : p.list(value)) cfg.sampling_rates.push_back(p.size(item, key));
    } else if (key == "runs") {
      cfg.runs = p.size(value, key);
    } else if (key == "models") {
      cfg.models.clear();
      for (auto item : p.list(value)) {
        const auto m = bench::parse_model(item);
        if (!m) p.fail("unknown model '" + std::string(item) + "' (expected tda or svm)");
        if (std::find(cfg.models.begin(), cfg.models.end(), *m) == cfg.models.end()) cfg.models.push_back(*m);
      }
    } else if (key == "n_intervals") {
      cfg.mapper.n_intervals = p.size(value, key);
    } else if (key == "overlap") {
      cfg.mapper.overlap = p.real(value, key);
    } else if (key == "gap_bins") {
      cfg.mapper.gap_bins = p.size(value, key);
    } else if (key == "folds") {
      cfg.cv.folds = p.size(value, key);
    } else if (key == "stratified") {
      cfg.cv.stratified = p.boolean(value, key);
    } else if (key == "l2") {
      cfg.logreg.l2 = p.real(value, key);
    } else if (key == "l1") {
      cfg.logreg.l1 = p.real(value, key);
    } else if (key == "logreg_iters") {
      cfg.logreg.max_iters = p.size(value, key);
    } else if (key == "svm_kernel") {
      if (value == "linear") cfg.svm.kernel = learn::KernelKind::Linear;
      else if (value == "rbf") cfg.svm.kernel = learn::KernelKind::Rbf;
      else p.fail("svm_kernel must be 'linear' or 'rbf'");
    } else if (key == "svm_c") {
      cfg.svm.C = p.real(value, key);
    } else if (key == "svm_gamma") {
      cfg.svm.gamma = value == "auto" ? 0.0 : p.real(value, key);
    } else if (key == "svm_epochs") {
      cfg.svm.epochs = p.size(value, key);
    } else if (key == "svm_sweeps") {
      cfg.svm.sweeps = p.size(value, key);
    } else if (key == "svm_max_train") {
      cfg.svm.max_train_points = p.size(value, key);
    } else if (key == "normalize_counts") {
      cfg.normalize_counts = p.boolean(value, key);
    } else if (key == "strict") {
      cfg.strict = p.boolean(value, key);
    } else if (key == "standardize") {
      if (value == "auto") cfg.standardize.reset();
      else cfg.standardize = p.boolean(value, key);
    } else if (key == "seed") {
      cfg.master_seed = p.u64(value, key);
    } else if (key == "threads") {
      cfg.threads = p.size(value, key);
    } else if (key == "timing") {
      cfg.record_timing = p.boolean(value, key);
    } else {
      p.fail("unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

bench::ExperimentConfig load_config(const std::filesystem::path& path, bench::ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), std::move(base));
}

}  // namespace mmtda
