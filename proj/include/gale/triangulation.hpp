#pragma once

#include <array>
#include <compare>
#include <vector>

#include "gale/types.hpp"

namespace gale {

// Kuhn cell of the cube [0,N]^d: v0 = anchor, vk = v(k-1) + e_perm(k-1).
struct Cell {
  Lattice anchor;
  Permutation perm;

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.anchor.size() == b.anchor.size() && a.anchor == b.anchor && a.perm == b.perm;
  }
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
    auto c = std::lexicographical_compare_three_way(a.anchor.data(), a.anchor.data() + a.anchor.size(),
                                                    b.anchor.data(), b.anchor.data() + b.anchor.size());
    if (c != 0) return c;
    return a.perm <=> b.perm;
  }
};

// Barycentric coordinates of a lattice vertex with respect to a large simplex,
// kept as integers scaled by N.
struct BarycentricCoords {
  VectorN<int> scaled;
  int N = 1;

  Point values() const { return scaled.cast<double>() / static_cast<double>(N); }
  int size() const { return static_cast<int>(scaled.size()); }
};

Cell containing_cell(const Point& x, int N);
BarycentricCoords barycentric(const Lattice& v, int N);
int label(const Lattice& v, int N);
std::vector<Lattice> cell_vertices(const Cell& cell);

// Triangle lattice {v in Z^3, v >= 0, sum v = N}.
struct TriangleVertices {
  std::array<Lattice, 3> items;
  int count = 0;

  const Lattice* begin() const { return items.data(); }
  const Lattice* end() const { return items.data() + count; }
};

struct TriangleCell {
  std::array<Lattice, 3> vertices;
  bool upward = true;
};

TriangleVertices nearest_triangle_vertices(const Point& x, int N);
TriangleCell containing_triangle_cell(const Point& x, int N);

}  // namespace gale
