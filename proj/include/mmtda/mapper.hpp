#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mmtda/dataio.hpp"

namespace mmtda::mapper {

enum class Filter { FirstPrincipalComponent };
enum class Metric { Euclidean };
enum class Linkage { Complete };

struct MapperParams {
  std::size_t n_intervals = 10;
  double overlap = 0.5;
  std::size_t gap_bins = 10;
  Filter filter = Filter::FirstPrincipalComponent;
  Metric metric = Metric::Euclidean;
  Linkage linkage = Linkage::Complete;

  /// Throws ParameterError unless n_intervals >= 1, gap_bins >= 1 and
  /// overlap is in [0, 0.95].
  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t index = 0;

  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct Node {
  std::size_t id = 0;
  std::size_t interval = 0;
  std::vector<std::size_t> members;  // pooled datapoint indices, ascending
};

struct MapperGraph {
  std::vector<Node> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (a, b) with a < b, sorted

  std::size_t num_nodes() const { return nodes.size(); }
};

/// One agglomeration step. `a` and `b` are cluster ids in the scipy
/// convention: 0..n-1 are the input points, n+s is the cluster created by
/// step s. `a < b` always.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;
};

/// Projection onto the leading eigenvector of the sample covariance, after
/// centering. The eigenvector's largest-magnitude entry is made positive.
std::vector<double> pca_filter(std::span<const double> coords, std::size_t dim);

/// Equal-length intervals L = range / (1 + (n-1)(1-p)) stepped by L(1-p);
/// the first starts at min(values) and the last ends at max(values).
std::vector<Interval> build_cover(std::span<const double> values, std::size_t n_intervals, double overlap);

/// Complete-linkage dendrogram of `count` points stored row-major in
/// `coords`. Each step merges the live pair with the smallest
/// (height, a, b), so heights are nondecreasing.
std::vector<Merge> complete_linkage(std::span<const double> coords, std::size_t dim);

/// Height below which merges are kept: lower edge of the first empty bin of a
/// `gap_bins`-bin histogram of merge heights over [0, max height]. Returns
/// +inf when no bin is empty (single cluster).
double first_gap_threshold(std::span<const Merge> merges, std::size_t gap_bins);

/// Flat clusters from applying every merge with height < threshold. Clusters
/// are ordered by their smallest member; labels[i] is point i's cluster.
std::vector<std::size_t> cut_dendrogram(std::span<const Merge> merges, std::size_t count, double threshold);

/// Partitions `count` points by complete linkage and the first-gap cut.
/// Returns one member list (local indices, ascending) per cluster, ordered by
/// smallest member.
std::vector<std::vector<std::size_t>> cluster_interval(std::span<const double> coords, std::size_t dim,
                                                       std::size_t gap_bins);

/// Full mapper pipeline over the pooled cloud.
MapperGraph build_graph(const SampledData& sampled, const MapperParams& params);

/// Same, but over an arbitrary row-major cloud.
MapperGraph build_graph(std::span<const double> coords, std::size_t dim, const MapperParams& params);

/// `{"nodes":[{"id","interval","members":[...]}],"edges":[[a,b],...]}`
std::string graph_to_json(const MapperGraph& graph);

}  // namespace mmtda::mapper
