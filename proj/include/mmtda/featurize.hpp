#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mmtda/dataio.hpp"
#include "mmtda/mapper.hpp"

namespace mmtda {

/// Samples x nodes occupancy counts. Row-major; counts[i * cols + j] is the
/// number of sample i's sampled datapoints that fall in node j.
struct NodeCountMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> counts;
  std::vector<int> sample_labels;
  std::vector<std::size_t> node_ids;
  std::size_t num_classes = 0;

  double at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {counts.data() + i * cols, cols}; }
  double row_sum(std::size_t i) const;
};

NodeCountMatrix node_count_matrix(const mapper::MapperGraph& graph, const SampledData& sampled);

/// Divides every row by k, turning counts into occupancy proportions.
NodeCountMatrix normalize_by_k(const NodeCountMatrix& matrix, std::size_t k);

/// Largest single-class share of a node's datapoints.
double node_purity(std::span<const int> member_labels, std::size_t num_classes);

struct NodeReportRow {
  std::size_t node_id = 0;
  std::size_t datapoints = 0;
  double purity = 1.0;
  std::vector<double> feature_means;
};

/// One row per node, sorted by datapoint count (descending) then node id.
/// Means are taken over `raw`, which must share pooled indexing with the
/// data the graph was built on.
std::vector<NodeReportRow> node_report(const mapper::MapperGraph& graph, const SampledData& raw);

/// `node_id,datapoints,purity,mean_<f1>,...` with 6 significant digits.
void write_node_report(const std::vector<NodeReportRow>& rows, const std::vector<std::string>& feature_names,
                       const std::filesystem::path& path);

}  // namespace mmtda
