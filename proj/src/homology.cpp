#include "mmtda/homology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mmtda/error.hpp"

namespace mmtda::homology {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return s;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_simplices(std::size_t num_vertices, std::vector<Edge> edges,
                                                    std::vector<Triangle> triangles) {
  SimplicialComplex c;
  c.num_vertices = num_vertices;
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    if (e[0] == e[1]) throw PreconditionError("complex: degenerate edge");
  }
  for (auto& t : triangles) {
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw PreconditionError("complex: degenerate triangle");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(triangles.begin(), triangles.end());
  triangles.erase(std::unique(triangles.begin(), triangles.end()), triangles.end());
  c.edges = std::move(edges);
  c.triangles = std::move(triangles);
  if (!c.is_closed()) throw PreconditionError("complex: a face of some simplex is missing");
  return c;
}

bool SimplicialComplex::is_closed() const {
  for (const auto& e : edges)
    if (e[1] >= num_vertices) return false;
  for (const auto& t : triangles) {
    if (edge_index({t[0], t[1]}) == edges.size()) return false;
    if (edge_index({t[0], t[2]}) == edges.size()) return false;
    if (edge_index({t[1], t[2]}) == edges.size()) return false;
  }
  return true;
}

std::size_t SimplicialComplex::edge_index(Edge e) const {
  const auto it = std::lower_bound(edges.begin(), edges.end(), e);
  return it != edges.end() && *it == e ? static_cast<std::size_t>(it - edges.begin()) : edges.size();
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool v) {
  std::uint64_t& w = words_[r * stride_ + c / 64];
  const std::uint64_t bit = std::uint64_t{1} << (c % 64);
  w = v ? (w | bit) : (w & ~bit);
}

std::size_t Gf2Matrix::count_ones() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Gf2Matrix Gf2Matrix::operator*(const Gf2Matrix& other) const {
  if (cols_ != other.rows_) throw PreconditionError("Gf2Matrix: shape mismatch in product");
  Gf2Matrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k)
      if (get(r, k))
        for (std::size_t w = 0; w < other.stride_; ++w) out.words_[r * out.stride_ + w] ^= other.words_[k * other.stride_ + w];
  return out;
}

std::size_t Gf2Matrix::rank() const {
  std::vector<std::uint64_t> m = words_;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    const std::size_t wi = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rank;
    while (pivot < rows_ && !(m[pivot * stride_ + wi] & bit)) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != rank)
      std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(pivot * stride_),
                       m.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * stride_),
                       m.begin() + static_cast<std::ptrdiff_t>(rank * stride_));
    for (std::size_t r = rank + 1; r < rows_; ++r)
      if (m[r * stride_ + wi] & bit)
        for (std::size_t w = wi; w < stride_; ++w) m[r * stride_ + w] ^= m[rank * stride_ + w];
    ++rank;
  }
  return rank;
}

SimplicialComplex build_vr(std::span<const double> coords, std::size_t dim, double r) {
  if (!(r > 0.0)) throw ParameterError("build_vr: r must be > 0");
  if (dim == 0) throw PreconditionError("build_vr: dimension must be positive");
  const std::size_t n = coords.size() / dim;
  const double r2 = r * r;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  SimplicialComplex c;
  c.num_vertices = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (sq_dist(&coords[i * dim], &coords[j * dim], dim) <= r2) {
        adj[i][j] = adj[j][i] = true;
        c.edges.push_back({i, j});
      }
  for (const auto& e : c.edges)
    for (std::size_t k = e[1] + 1; k < n; ++k)
      if (adj[e[0]][k] && adj[e[1]][k]) c.triangles.push_back({e[0], e[1], k});
  return c;
}

Gf2Matrix boundary_matrix(const SimplicialComplex& complex, int degree) {
  if (degree == 1) {
    Gf2Matrix m(complex.num_vertices, complex.edges.size());
    for (std::size_t j = 0; j < complex.edges.size(); ++j) {
      m.set(complex.edges[j][0], j, true);
      m.set(complex.edges[j][1], j, true);
    }
    return m;
  }
  if (degree == 2) {
    Gf2Matrix m(complex.edges.size(), complex.triangles.size());
    for (std::size_t j = 0; j < complex.triangles.size(); ++j) {
      const auto& t = complex.triangles[j];
      for (const Edge& face : {Edge{t[0], t[1]}, Edge{t[0], t[2]}, Edge{t[1], t[2]}}) {
        const std::size_t row = complex.edge_index(face);
        if (row == complex.edges.size()) throw PreconditionError("boundary_matrix: complex is not closed");
        m.set(row, j, true);
      }
    }
    return m;
  }
  throw ParameterError("boundary_matrix: degree must be 1 or 2, got " + std::to_string(degree));
}

Betti betti(const SimplicialComplex& complex) {
  const std::size_t rank1 = boundary_matrix(complex, 1).rank();
  const std::size_t rank2 = boundary_matrix(complex, 2).rank();
  return {complex.num_vertices - rank1, complex.edges.size() - rank1 - rank2};
}

SimplicialComplex loop_and_triangle_complex() {
  return SimplicialComplex::from_simplices(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}, {{2, 3, 4}});
}

std::vector<double> loop_and_triangle_points() {
  return {0.0, -0.6, -1.0, -1.0, 0.2, -1.4, 1.2, -1.6, 0.0, -2.4};
}

}  // namespace mmtda::homology
