#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mmtda::homology {

using Edge = std::array<std::size_t, 2>;
using Triangle = std::array<std::size_t, 3>;

/// Simplicial complex up to dimension 2. Simplices are stored with sorted
/// vertex indices and kept in lexicographic order.
struct SimplicialComplex {
  std::size_t num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;

  /// Sorts and deduplicates the simplices; throws PreconditionError if a
  /// face is missing or an index is out of range.
  static SimplicialComplex from_simplices(std::size_t num_vertices, std::vector<Edge> edges,
                                          std::vector<Triangle> triangles);
  bool is_closed() const;
  /// Index of `e` in `edges`, or edges.size() if absent.
  std::size_t edge_index(Edge e) const;
};

/// Dense matrix over the two-element field, rows packed into 64-bit words.
class Gf2Matrix {
 public:
  Gf2Matrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return (words_[r * stride_ + c / 64] >> (c % 64)) & 1U; }
  void set(std::size_t r, std::size_t c, bool v);
  std::size_t count_ones() const;
  bool is_zero() const { return count_ones() == 0; }

  Gf2Matrix operator*(const Gf2Matrix& other) const;
  /// Rank by Gaussian elimination.
  std::size_t rank() const;

 private:
  std::size_t rows_, cols_, stride_;
  std::vector<std::uint64_t> words_;
};

/// Vietoris-Rips complex at scale r, truncated at triangles: an edge for
/// every pair within distance r and a triangle for every triple pairwise
/// within r.
SimplicialComplex build_vr(std::span<const double> coords, std::size_t dim, double r);

/// degree 1: vertices x edges. degree 2: edges x triangles.
Gf2Matrix boundary_matrix(const SimplicialComplex& complex, int degree);

struct Betti {
  std::size_t b0 = 0;
  std::size_t b1 = 0;
  bool operator==(const Betti&) const = default;
};

Betti betti(const SimplicialComplex& complex);

/// Five vertices: a filled triangle {2,3,4} sharing vertex 2 with the hollow
/// loop 0-1-2. Six edges, one triangle; Betti numbers (1, 1).
SimplicialComplex loop_and_triangle_complex();

/// Planar coordinates for the five vertices of loop_and_triangle_complex().
std::vector<double> loop_and_triangle_points();

}  // namespace mmtda::homology
