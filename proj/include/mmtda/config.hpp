#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mmtda/bench.hpp"

namespace mmtda {

/// Parses `key = value` lines (`#` starts a comment) on top of `base`.
/// Unknown keys and malformed values raise ParseError naming the line.
///
/// Keys: dataset, examples_per_class, sampling_rates, runs, models,
/// n_intervals, overlap, gap_bins, folds, stratified, l2, l1, logreg_iters,
/// svm_kernel, svm_c, svm_gamma, svm_epochs, svm_sweeps, svm_max_train,
/// normalize_counts, strict, standardize, seed, threads, timing.
bench::ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                                     bench::ExperimentConfig base = {});
bench::ExperimentConfig load_config(const std::filesystem::path& path, bench::ExperimentConfig base = {});

/// Every key parse_config accepts.
const std::vector<std::string>& config_keys();

}  // namespace mmtda
