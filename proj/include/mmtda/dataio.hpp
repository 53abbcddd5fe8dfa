#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmtda/rng.hpp"

namespace mmtda {

/// One sample: a bag of d-dimensional datapoints sharing a class label.
/// Coordinates are stored row-major.
struct PointSet {
  std::string sample_id;
  int label = 0;
  std::size_t dim = 2;
  std::vector<double> coords;

  PointSet() = default;
  PointSet(std::string id, int lbl, std::size_t d) : sample_id(std::move(id)), label(lbl), dim(d) {}

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  bool empty() const { return coords.empty(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  void push(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
  void push(double x, double y) {
    coords.push_back(x);
    coords.push_back(y);
  }

  bool operator==(const PointSet&) const = default;
};

/// Labeled collection of samples. Labels are dense 0..C-1 indices into
/// `class_names`.
struct Dataset {
  std::vector<PointSet> samples;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  std::size_t dim() const { return feature_names.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  /// Smallest number of datapoints across samples (0 when there are none).
  std::size_t min_sample_size() const;
  /// Throws PreconditionError if any Dataset invariant is broken.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// k datapoints drawn from every sample, pooled into one cloud. `owner[p]`
/// is the sample index of pooled point p; points of sample i occupy rows
/// [i*k, (i+1)*k).
struct SampledData {
  std::size_t dim = 0;
  std::size_t k = 0;
  std::vector<double> coords;
  std::vector<int> owner;
  std::vector<int> labels;  // per sample
  std::size_t num_classes = 0;

  std::size_t size() const { return owner.size(); }
  std::size_t num_samples() const { return labels.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  /// The k pooled rows that belong to sample s, as one contiguous block.
  std::span<const double> sample_block(std::size_t s) const {
    return {coords.data() + s * k * dim, k * dim};
  }

  bool operator==(const SampledData&) const = default;
};

/// Reads `sample_id,label,<f1>,...,<fd>`. Rows of one sample may be
/// interleaved with others; samples and labels are indexed by first appearance.
Dataset load_csv(const std::filesystem::path& path);
/// Writes the same schema with 17 significant digits per feature.
void save_csv(const Dataset& data, const std::filesystem::path& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Uniform sampling without replacement of k datapoints per sample.
SampledData subsample(const Dataset& data, std::size_t k, Rng& rng);

/// Z-scores each feature column over the pooled cloud. Constant columns
/// become all zeros.
SampledData standardize(const SampledData& sampled);

}  // namespace mmtda
