#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace oracle {

using mmtda::homology::Edge;
using mmtda::homology::SimplicialComplex;
using mmtda::homology::Triangle;
using mmtda::mapper::MapperGraph;
using mmtda::mapper::MapperParams;
using mmtda::mapper::Merge;

namespace {

double distance(std::span<const double> coords, std::size_t dim, std::size_t i, std::size_t j) {
  double ss = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    const double d = coords[i * dim + c] - coords[j * dim + c];
    ss += d * d;
  }
  return std::sqrt(ss);
}

std::vector<double> covariance(std::span<const double> coords, std::size_t dim) {
  const std::size_t n = coords.size() / dim;
  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) mean[c] += coords[i * dim + c] / static_cast<double>(n);
  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        cov[a * dim + b] += (coords[i * dim + a] - mean[a]) * (coords[i * dim + b] - mean[b]);
  for (double& v : cov) v /= static_cast<double>(n - 1);
  return cov;
}

std::vector<std::vector<std::size_t>> first_gap_clusters(std::span<const double> coords, std::size_t dim,
                                                         std::size_t bins) {
  const std::size_t n = coords.size() / dim;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (n <= 2) return {all};

  const auto merges = complete_linkage(coords, dim);
  double hmax = 0.0;
  for (const auto& m : merges) hmax = std::max(hmax, m.height);
  double threshold = std::numeric_limits<double>::infinity();
  if (hmax > 0.0) {
    const double width = hmax / static_cast<double>(bins);
    std::vector<int> hist(bins, 0);
    for (const auto& m : merges) hist[std::min(static_cast<std::size_t>(m.height / width), bins - 1)]++;
    for (std::size_t b = 0; b < bins; ++b) {
      if (hist[b] == 0) {
        threshold = static_cast<double>(b) * width;
        break;
      }
    }
  }

  // Expand every cluster id to its point set, then keep merges below the cut.
  std::vector<std::set<std::size_t>> members(n + merges.size());
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  for (std::size_t s = 0; s < merges.size(); ++s) {
    members[n + s] = members[merges[s].a];
    members[n + s].insert(members[merges[s].b].begin(), members[merges[s].b].end());
    if (merges[s].height < threshold) {
      const int keep = label[*members[n + s].begin()];
      std::vector<int> old;
      for (std::size_t p : members[n + s]) old.push_back(label[p]);
      for (std::size_t p = 0; p < n; ++p)
        if (std::find(old.begin(), old.end(), label[p]) != old.end()) label[p] = keep;
    }
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < n; ++p) groups[label[p]].push_back(p);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace

std::vector<double> random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  std::vector<double> out(n * dim);
  for (double& v : out) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v = static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  return out;
}

std::vector<Merge> complete_linkage(std::span<const double> coords, std::size_t dim) {
  const std::size_t n = coords.size() / dim;
  struct Cluster {
    std::size_t id;
    std::vector<std::size_t> points;
  };
  std::vector<Cluster> live;
  for (std::size_t i = 0; i < n; ++i) live.push_back({i, {i}});

  std::vector<Merge> out;
  while (live.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    std::pair<std::size_t, std::size_t> best_ids{n + n, n + n};
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        double d = 0.0;
        for (std::size_t p : live[i].points)
          for (std::size_t q : live[j].points) d = std::max(d, distance(coords, dim, p, q));
        const std::pair<std::size_t, std::size_t> ids{std::min(live[i].id, live[j].id), std::max(live[i].id, live[j].id)};
        if (d < best || (d == best && ids < best_ids)) {
          best = d;
          bi = i;
          bj = j;
          best_ids = ids;
        }
      }
    }
    Cluster merged{n + out.size(), live[bi].points};
    merged.points.insert(merged.points.end(), live[bj].points.begin(), live[bj].points.end());
    out.push_back({best_ids.first, best_ids.second, best, merged.points.size()});
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(bj));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(bi));
    live.push_back(std::move(merged));
  }
  return out;
}

std::vector<double> leading_eigenvector(const std::vector<double>& a, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  if (dim == 1) {
    v[0] = 1.0;
    return v;
  }
  if (dim == 2) {
    const double p = a[0], q = a[1], r = a[3];
    const double lambda = 0.5 * (p + r) + std::hypot(0.5 * (p - r), q);
    const double u0 = q, u1 = lambda - p;
    const double w0 = lambda - r, w1 = q;
    if (std::hypot(u0, u1) >= std::hypot(w0, w1)) v = {u0, u1};
    else v = {w0, w1};
  } else {
    // Trigonometric roots of the characteristic cubic.
    const double off = a[1] * a[1] + a[2] * a[2] + a[5] * a[5];
    const double q = (a[0] + a[4] + a[8]) / 3.0;
    const double p2 = (a[0] - q) * (a[0] - q) + (a[4] - q) * (a[4] - q) + (a[8] - q) * (a[8] - q) + 2.0 * off;
    const double p = std::sqrt(p2 / 6.0);
    double lambda = a[0];
    if (p > 0.0) {
      double b[9];
      for (int i = 0; i < 9; ++i) b[i] = (a[i] - (i % 4 == 0 ? q : 0.0)) / p;
      const double det = b[0] * (b[4] * b[8] - b[5] * b[7]) - b[1] * (b[3] * b[8] - b[5] * b[6]) +
                         b[2] * (b[3] * b[7] - b[4] * b[6]);
      const double phi = std::acos(std::clamp(det / 2.0, -1.0, 1.0)) / 3.0;
      lambda = q + 2.0 * p * std::cos(phi);
    }
    // Null vector of A - lambda I: the largest cross product of two rows.
    double m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = a[i * 3 + j] - (i == j ? lambda : 0.0);
    double best = -1.0;
    for (int r0 = 0; r0 < 3; ++r0) {
      const int r1 = (r0 + 1) % 3;
      const double c[3] = {m[r0][1] * m[r1][2] - m[r0][2] * m[r1][1], m[r0][2] * m[r1][0] - m[r0][0] * m[r1][2],
                           m[r0][0] * m[r1][1] - m[r0][1] * m[r1][0]};
      const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      if (norm > best) {
        best = norm;
        v = {c[0], c[1], c[2]};
      }
    }
  }
  double norm = 0.0, big = 0.0;
  for (double x : v) {
    norm += x * x;
    if (std::abs(x) > std::abs(big)) big = x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x = (big < 0 ? -x : x) / norm;
  return v;
}

std::vector<double> pca_projection(std::span<const double> coords, std::size_t dim) {
  const std::size_t n = coords.size() / dim;
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const auto v = leading_eigenvector(covariance(coords, dim), dim);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) mean[c] += coords[i * dim + c] / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) out[i] += (coords[i * dim + c] - mean[c]) * v[c];
  return out;
}

MapperGraph mapper_graph(std::span<const double> coords, std::size_t dim, const MapperParams& params) {
  const std::size_t n = coords.size() / dim;
  const auto f = pca_projection(coords, dim);
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  const double count = static_cast<double>(params.n_intervals);
  const double length = (hi - lo) / (1.0 + (count - 1.0) * (1.0 - params.overlap));
  const double step = length * (1.0 - params.overlap);

  MapperGraph g;
  for (std::size_t i = 0; i < params.n_intervals; ++i) {
    const double a = i == 0 ? lo : lo + static_cast<double>(i) * step;
    const double b = i + 1 == params.n_intervals ? hi : lo + static_cast<double>(i) * step + length;
    std::vector<std::size_t> inside;
    for (std::size_t p = 0; p < n; ++p)
      if (f[p] >= a && f[p] <= b) inside.push_back(p);
    if (inside.empty()) continue;
    std::vector<double> local;
    for (std::size_t p : inside) local.insert(local.end(), coords.begin() + p * dim, coords.begin() + (p + 1) * dim);
    for (const auto& cluster : first_gap_clusters(local, dim, params.gap_bins)) {
      mmtda::mapper::Node node;
      node.id = g.nodes.size();
      node.interval = i;
      for (std::size_t li : cluster) node.members.push_back(inside[li]);
      g.nodes.push_back(std::move(node));
    }
  }
  for (const auto& x : g.nodes) {
    for (const auto& y : g.nodes) {
      if (x.id >= y.id || y.interval != x.interval + 1) continue;
      std::vector<std::size_t> common;
      std::set_intersection(x.members.begin(), x.members.end(), y.members.begin(), y.members.end(),
                            std::back_inserter(common));
      if (!common.empty()) g.edges.emplace_back(x.id, y.id);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double> w, double eps) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + eps;
    const double up = f(w);
    w[i] = keep - eps;
    const double down = f(w);
    w[i] = keep;
    g[i] = (up - down) / (2.0 * eps);
  }
  return g;
}

std::size_t component_count(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const std::size_t a = find(e[0]), b = find(e[1]);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

SimplicialComplex vr_complex(std::span<const double> coords, std::size_t dim, double r) {
  const std::size_t n = coords.size() / dim;
  SimplicialComplex c;
  c.num_vertices = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(coords, dim, i, j) <= r) c.edges.push_back({i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (distance(coords, dim, i, j) <= r && distance(coords, dim, i, k) <= r && distance(coords, dim, j, k) <= r)
          c.triangles.push_back({i, j, k});
  return c;
}

}  // namespace oracle
