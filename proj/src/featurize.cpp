#include "mmtda/featurize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "mmtda/error.hpp"

namespace mmtda {

double NodeCountMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (double v : row(i)) s += v;
  return s;
}

NodeCountMatrix node_count_matrix(const mapper::MapperGraph& graph, const SampledData& sampled) {
  NodeCountMatrix m;
  m.rows = sampled.num_samples();
  m.cols = graph.num_nodes();
  m.counts.assign(m.rows * m.cols, 0.0);
  m.sample_labels = sampled.labels;
  m.num_classes = sampled.num_classes;
  m.node_ids.reserve(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    const auto& node = graph.nodes[j];
    m.node_ids.push_back(node.id);
    for (std::size_t p : node.members) {
      if (p >= sampled.size()) throw PreconditionError("node_count_matrix: graph does not match sampled data");
      m.counts[static_cast<std::size_t>(sampled.owner[p]) * m.cols + j] += 1.0;
    }
  }
  return m;
}

NodeCountMatrix normalize_by_k(const NodeCountMatrix& matrix, std::size_t k) {
  if (k == 0) throw PreconditionError("normalize_by_k: k must be positive");
  NodeCountMatrix out = matrix;
  for (double& v : out.counts) v /= static_cast<double>(k);
  return out;
}

double node_purity(std::span<const int> member_labels, std::size_t num_classes) {
  if (member_labels.empty()) throw PreconditionError("node_purity: node has no members");
  std::vector<std::size_t> freq(num_classes, 0);
  for (int l : member_labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes)
      throw PreconditionError("node_purity: label out of range");
    ++freq[static_cast<std::size_t>(l)];
  }
  const std::size_t top = *std::max_element(freq.begin(), freq.end());
  return static_cast<double>(top) / static_cast<double>(member_labels.size());
}

std::vector<NodeReportRow> node_report(const mapper::MapperGraph& graph, const SampledData& raw) {
  if (graph.nodes.empty()) throw PreconditionError("node_report: graph has no nodes");
  const std::size_t d = raw.dim;
  std::vector<NodeReportRow> rows;
  rows.reserve(graph.nodes.size());
  std::vector<int> labels;
  for (const auto& node : graph.nodes) {
    NodeReportRow r;
    r.node_id = node.id;
    r.datapoints = node.members.size();
    r.feature_means.assign(d, 0.0);
    labels.clear();
    for (std::size_t p : node.members) {
      if (p >= raw.size()) throw PreconditionError("node_report: graph does not match sampled data");
      const auto x = raw.point(p);
      for (std::size_t c = 0; c < d; ++c) r.feature_means[c] += x[c];
      labels.push_back(raw.labels[static_cast<std::size_t>(raw.owner[p])]);
    }
    for (double& v : r.feature_means) v /= static_cast<double>(r.datapoints);
    r.purity = node_purity(labels, raw.num_classes);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const NodeReportRow& a, const NodeReportRow& b) {
    return a.datapoints != b.datapoints ? a.datapoints > b.datapoints : a.node_id < b.node_id;
  });
  return rows;
}

void write_node_report(const std::vector<NodeReportRow>& rows, const std::vector<std::string>& feature_names,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "node_id,datapoints,purity";
  for (const auto& f : feature_names) out << ",mean_" << f;
  out << '\n';
  char buf[40];
  for (const auto& r : rows) {
    out << r.node_id << ',' << r.datapoints;
    std::snprintf(buf, sizeof buf, ",%.6g", r.purity);
    out << buf;
    for (double v : r.feature_means) {
      std::snprintf(buf, sizeof buf, ",%.6g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace mmtda
