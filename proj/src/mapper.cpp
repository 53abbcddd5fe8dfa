#include "mmtda/mapper.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "mmtda/error.hpp"

namespace mmtda::mapper {

namespace {

// Above this many points the condensed distance matrix is stored as float to
// halve memory (a 28k-point interval then needs ~1.6 GB instead of ~3.1 GB).
constexpr std::size_t kFloatStorageAbove = 8192;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Attaches the root of `a` under the root of `b`.
  void unite_into(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Greedy complete linkage over a condensed distance matrix with a cached
// nearest neighbour per live cluster. Every step merges the pair with the
// smallest (distance, smaller id, larger id). Merging only raises distances
// and gives the new cluster the largest id, so only clusters whose cached
// neighbour took part in the merge need a rescan.
template <typename T>
std::vector<Merge> greedy_complete(std::span<const double> coords, std::size_t dim, std::size_t n) {
  std::vector<Merge> out;
  if (n < 2) return out;
  out.reserve(n - 1);

  std::vector<T> dist(n * (n - 1) / 2);
  std::vector<std::size_t> row_base(n);
  for (std::size_t i = 0; i < n; ++i) row_base[i] = i * n - i * (i + 1) / 2 - i - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double* pi = coords.data() + i * dim;
    const std::size_t base = row_base[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* pj = coords.data() + j * dim;
      double ss = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double dv = pi[c] - pj[c];
        ss += dv * dv;
      }
      dist[base + j] = static_cast<T>(std::sqrt(ss));
    }
  }
  auto at = [&](std::size_t a, std::size_t b) -> T& {
    return a < b ? dist[row_base[a] + b] : dist[row_base[b] + a];
  };

  // Slot s holds the cluster with scipy id `id[s]`.
  std::vector<std::size_t> id(n), size(n, 1), nn(n);
  std::iota(id.begin(), id.end(), std::size_t{0});
  std::vector<T> nn_dist(n);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  // (d, lo, hi) ordering of the pair formed by slot s and slot t.
  auto pair_less = [&](T d1, std::size_t s1, std::size_t t1, T d2, std::size_t s2, std::size_t t2) {
    if (d1 != d2) return d1 < d2;
    const auto p1 = std::minmax(id[s1], id[t1]);
    const auto p2 = std::minmax(id[s2], id[t2]);
    return std::pair(p1.first, p1.second) < std::pair(p2.first, p2.second);
  };
  auto rescan = [&](std::size_t s) {
    std::size_t best = s;
    T best_d = std::numeric_limits<T>::infinity();
    for (std::size_t t : active) {
      if (t == s) continue;
      const T d = t < s ? dist[row_base[t] + s] : dist[row_base[s] + t];
      if (best == s || pair_less(d, s, t, best_d, s, best)) {
        best = t;
        best_d = d;
      }
    }
    nn[s] = best;
    nn_dist[s] = best_d;
  };
  for (std::size_t s = 0; s < n; ++s) rescan(s);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t x = active.front();
    for (std::size_t s : active)
      if (pair_less(nn_dist[s], s, nn[s], nn_dist[x], x, nn[x])) x = s;
    std::size_t y = nn[x];
    if (id[x] > id[y]) std::swap(x, y);
    out.push_back({id[x], id[y], static_cast<double>(nn_dist[x]), size[x] + size[y]});

    // The merged cluster lives in slot y.
    for (std::size_t z : active) {
      if (z == x || z == y) continue;
      T& dy = at(y, z);
      dy = std::max(dy, at(x, z));
    }
    active.erase(std::lower_bound(active.begin(), active.end(), x));
    id[y] = n + step;
    size[y] += size[x];
    if (active.size() < 2) break;
    rescan(y);
    for (std::size_t z : active)
      if (z != y && (nn[z] == x || nn[z] == y)) rescan(z);
  }
  return out;
}

}  // namespace

void MapperParams::validate() const {
  if (n_intervals < 1) throw ParameterError("mapper: n_intervals must be >= 1");
  if (gap_bins < 1) throw ParameterError("mapper: gap_bins must be >= 1");
  if (!(overlap >= 0.0 && overlap <= 0.95)) throw ParameterError("mapper: overlap must be in [0, 0.95]");
}

std::vector<double> pca_filter(std::span<const double> coords, std::size_t dim) {
  if (dim == 0) throw PreconditionError("pca_filter: dimension must be positive");
  const std::size_t n = coords.size() / dim;
  if (n == 0) throw PreconditionError("pca_filter: no points");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
      coords.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  std::vector<double> out(n, 0.0);
  if (n == 1) return out;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigenvalues ascend; the last column is the leading direction.
  Eigen::VectorXd v = eig.eigenvectors().col(static_cast<Eigen::Index>(dim) - 1);
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0) v = -v;
  const Eigen::VectorXd proj = centered * v;
  for (std::size_t i = 0; i < n; ++i) out[i] = proj[static_cast<Eigen::Index>(i)];
  return out;
}

std::vector<Interval> build_cover(std::span<const double> values, std::size_t n_intervals, double overlap) {
  if (values.empty()) throw PreconditionError("build_cover: no filter values");
  if (n_intervals < 1) throw ParameterError("build_cover: n_intervals must be >= 1");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw ParameterError("build_cover: overlap must be in [0, 1)");
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn_it;
  const double hi = *mx_it;
  if (!(hi > lo)) {
    const double eps = 1e-9 * std::max(1.0, std::abs(lo));
    return {Interval{lo, lo + eps, 0}};
  }
  const double range = hi - lo;
  const double n = static_cast<double>(n_intervals);
  const double length = range / (1.0 + (n - 1.0) * (1.0 - overlap));
  const double step = length * (1.0 - overlap);

  std::vector<Interval> cover(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    cover[i].index = i;
    cover[i].lo = lo + static_cast<double>(i) * step;
    cover[i].hi = cover[i].lo + length;
  }
  // Close rounding slivers so consecutive intervals always touch.
  for (std::size_t i = 0; i + 1 < n_intervals; ++i) cover[i].hi = std::max(cover[i].hi, cover[i + 1].lo);
  cover.front().lo = lo;
  cover.back().hi = hi;
  return cover;
}

std::vector<Merge> complete_linkage(std::span<const double> coords, std::size_t dim) {
  if (dim == 0) throw PreconditionError("complete_linkage: dimension must be positive");
  const std::size_t n = coords.size() / dim;
  return n > kFloatStorageAbove ? greedy_complete<float>(coords, dim, n) : greedy_complete<double>(coords, dim, n);
}

double first_gap_threshold(std::span<const Merge> merges, std::size_t gap_bins) {
  constexpr double kNoCut = std::numeric_limits<double>::infinity();
  if (merges.empty() || gap_bins == 0) return kNoCut;
  double hmax = 0.0;
  for (const auto& m : merges) hmax = std::max(hmax, m.height);
  if (!(hmax > 0.0)) return kNoCut;
  const double width = hmax / static_cast<double>(gap_bins);
  std::vector<std::size_t> hist(gap_bins, 0);
  for (const auto& m : merges) {
    auto bin = static_cast<std::size_t>(m.height / width);
    hist[std::min(bin, gap_bins - 1)]++;
  }
  for (std::size_t b = 0; b < gap_bins; ++b)
    if (hist[b] == 0) return static_cast<double>(b) * width;
  return kNoCut;
}

std::vector<std::size_t> cut_dendrogram(std::span<const Merge> merges, std::size_t count, double threshold) {
  // Rebuild point membership by replaying merges below the threshold.
  std::vector<std::size_t> rep(count + merges.size());
  UnionFind uf(count);
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(count), std::size_t{0});
  for (std::size_t s = 0; s < merges.size(); ++s) {
    const Merge& m = merges[s];
    rep[count + s] = rep[m.b];
    if (m.height < threshold) uf.unite_into(rep[m.a], rep[m.b]);
  }
  std::vector<std::size_t> labels(count);
  std::vector<std::size_t> root_label(count, std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = uf.find(i);
    if (root_label[r] == std::numeric_limits<std::size_t>::max()) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  return labels;
}

std::vector<std::vector<std::size_t>> cluster_interval(std::span<const double> coords, std::size_t dim,
                                                       std::size_t gap_bins) {
  if (dim == 0) throw PreconditionError("cluster_interval: dimension must be positive");
  const std::size_t n = coords.size() / dim;
  if (n == 0) throw PreconditionError("cluster_interval: no members");
  if (n <= 2) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return {all};
  }
  const auto merges = complete_linkage(coords, dim);
  const double threshold = first_gap_threshold(merges, gap_bins);
  const auto labels = cut_dendrogram(merges, n, threshold);
  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> clusters(k);
  for (std::size_t i = 0; i < n; ++i) clusters[labels[i]].push_back(i);
  return clusters;
}

MapperGraph build_graph(std::span<const double> coords, std::size_t dim, const MapperParams& params) {
  params.validate();
  if (dim == 0) throw PreconditionError("build_graph: dimension must be positive");
  const std::size_t n = coords.size() / dim;
  if (n == 0) throw PreconditionError("build_graph: empty point cloud");

  const std::vector<double> filter = pca_filter(coords, dim);
  const std::vector<Interval> cover = build_cover(filter, params.n_intervals, params.overlap);

  MapperGraph graph;
  std::vector<std::vector<std::size_t>> nodes_of_point(n);
  std::vector<std::size_t> members;
  std::vector<double> local;
  for (const Interval& iv : cover) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (iv.contains(filter[i])) members.push_back(i);
    if (members.empty()) continue;
    local.resize(members.size() * dim);
    for (std::size_t m = 0; m < members.size(); ++m)
      std::copy_n(coords.data() + members[m] * dim, dim, local.data() + m * dim);
    for (const auto& cluster : cluster_interval(local, dim, params.gap_bins)) {
      Node node;
      node.id = graph.nodes.size();
      node.interval = iv.index;
      node.members.reserve(cluster.size());
      for (std::size_t li : cluster) {
        node.members.push_back(members[li]);
        nodes_of_point[members[li]].push_back(node.id);
      }
      graph.nodes.push_back(std::move(node));
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& owned : nodes_of_point) {
    for (std::size_t a = 0; a < owned.size(); ++a) {
      for (std::size_t b = a + 1; b < owned.size(); ++b) {
        const std::size_t ia = graph.nodes[owned[a]].interval;
        const std::size_t ib = graph.nodes[owned[b]].interval;
        if (ia + 1 == ib || ib + 1 == ia) edges.emplace(std::min(owned[a], owned[b]), std::max(owned[a], owned[b]));
      }
    }
  }
  graph.edges.assign(edges.begin(), edges.end());
  return graph;
}

MapperGraph build_graph(const SampledData& sampled, const MapperParams& params) {
  if (sampled.size() == 0) throw PreconditionError("build_graph: sampled data is empty");
  return build_graph(sampled.coords, sampled.dim, params);
}

std::string graph_to_json(const MapperGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& node : graph.nodes)
    nodes.push_back({{"id", node.id}, {"interval", node.interval}, {"members", node.members}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
  nlohmann::json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump();
}

}  // namespace mmtda::mapper
