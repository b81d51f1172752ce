#include "gale/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gale/geometry.hpp"

namespace gale {

namespace {

constexpr double kSnap = 1e-9;

void check_cube_vertex(const Lattice& v, int N, const char* what) {
  if (N < 1) throw DomainError(std::string(what) + ": N must be at least 1");
  if (v.size() < 1 || v.size() >= kMaxDim) {
    throw DomainError(std::string(what) + ": cube dimension must lie in [1, " + std::to_string(kMaxDim - 1) + "]");
  }
  if (v.minCoeff() < 0 || v.maxCoeff() > N) throw DomainError(std::string(what) + ": vertex outside the cube");
}

}  // namespace

Cell containing_cell(const Point& x, int N) {
  const int d = static_cast<int>(x.size());
  require_dimension(d, "containing_cell");
  if (N < 1) throw DomainError("containing_cell: N must be at least 1");
  if (!x.allFinite() || x.minCoeff() < -kSnap || x.maxCoeff() > N + kSnap) {
    throw DomainError("containing_cell: point outside the cube");
  }
  Cell cell;
  cell.anchor.resize(d);
  Point frac(d);
  for (int i = 0; i < d; ++i) {
    const double xi = std::clamp(x[i], 0.0, static_cast<double>(N));
    const int a = std::clamp(static_cast<int>(std::ceil(xi - kSnap)) - 1, 0, N - 1);
    cell.anchor[i] = a;
    frac[i] = std::clamp(xi - a, 0.0, 1.0);
  }
  cell.perm = sort_permutation(frac);
  return cell;
}

BarycentricCoords barycentric(const Lattice& v, int N) {
  check_cube_vertex(v, N, "barycentric");
  const int d = static_cast<int>(v.size());
  const Permutation order = sort_permutation(v);
  BarycentricCoords out;
  out.N = N;
  out.scaled.resize(d + 1);
  out.scaled[0] = N - v[order[0]];
  for (int k = 1; k < d; ++k) out.scaled[k] = v[order[k - 1]] - v[order[k]];
  out.scaled[d] = v[order[d - 1]];
  return out;
}

int label(const Lattice& v, int N) {
  const BarycentricCoords a = barycentric(v, N);
  const int d = static_cast<int>(v.size());
  long long sum = 0;
  for (int i = 0; i <= d; ++i) sum += static_cast<long long>(i) * a.scaled[i];
  return static_cast<int>(sum % (d + 1));
}

std::vector<Lattice> cell_vertices(const Cell& cell) {
  const int d = static_cast<int>(cell.anchor.size());
  if (cell.perm.size() != d) throw DimensionMismatch("cell_vertices: anchor and permutation sizes differ");
  std::vector<Lattice> out;
  out.reserve(d + 1);
  Lattice v = cell.anchor;
  out.push_back(v);
  for (int k = 0; k < d; ++k) {
    v[cell.perm[k]] += 1;
    out.push_back(v);
  }
  return out;
}

namespace {

Point snap_triangle_point(const Point& x, int N, const char* what) {
  if (x.size() != 3) throw DimensionMismatch(std::string(what) + ": expected 3 coordinates");
  if (N < 1) throw DomainError(std::string(what) + ": N must be at least 1");
  const double tol = kSnap * std::max(1, N);
  if (!x.allFinite() || x.minCoeff() < -tol || std::abs(x.sum() - N) > tol) {
    throw DomainError(std::string(what) + ": point not on the scaled triangle");
  }
  Point y = x.cwiseMax(0.0);
  for (int i = 0; i < 3; ++i) {
    const double r = std::round(y[i]);
    if (std::abs(y[i] - r) <= tol) y[i] = r;
  }
  return y;
}

}  // namespace

TriangleVertices nearest_triangle_vertices(const Point& x, int N) {
  const Point y = snap_triangle_point(x, N, "nearest_triangle_vertices");
  std::array<int, 3> lo{}, hi{};
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<int>(std::floor(y[i]));
    hi[i] = static_cast<int>(std::ceil(y[i]));
  }
  TriangleVertices all;
  std::array<double, 8> dist{};
  std::array<Lattice, 8> cand;
  int found = 0;
  for (int mask = 0; mask < 8; ++mask) {
    Lattice r(3);
    bool skip = false;
    for (int i = 0; i < 3; ++i) {
      const bool up = (mask >> i) & 1;
      if (up && hi[i] == lo[i]) skip = true;
      r[i] = up ? hi[i] : lo[i];
    }
    if (skip || r.sum() != N) continue;
    cand[found] = r;
    dist[found] = (y - r.cast<double>()).lpNorm<1>();
    ++found;
  }
  if (found == 0) throw DomainError("nearest_triangle_vertices: no rounding sums to N");
  const double best = *std::min_element(dist.begin(), dist.begin() + found);
  for (int c = 0; c < found; ++c) {
    if (dist[c] <= best + 1e-12 && all.count < 3) all.items[all.count++] = cand[c];
  }
  return all;
}

TriangleCell containing_triangle_cell(const Point& x, int N) {
  const Point y = snap_triangle_point(x, N, "containing_triangle_cell");
  Lattice lo(3);
  for (int i = 0; i < 3; ++i) lo[i] = static_cast<int>(std::floor(y[i]));
  const int s = lo.sum();
  TriangleCell cell;
  if (s == N - 2) {
    // Downward cell: ceil(x) - e_k.
    cell.upward = false;
    Lattice top = lo + Lattice::Ones(3);
    for (int k = 0; k < 3; ++k) {
      cell.vertices[k] = top;
      cell.vertices[k][k] -= 1;
    }
    return cell;
  }
  Lattice base = lo;
  if (s == N) {
    // Lattice point; pick the upward cell whose base is x - e_k for the first positive k.
    int k = 0;
    while (k < 3 && base[k] == 0) ++k;
    if (k == 3 || N == 0) throw DomainError("containing_triangle_cell: degenerate lattice");
    base[k] -= 1;
  }
  for (int k = 0; k < 3; ++k) {
    cell.vertices[k] = base;
    cell.vertices[k][k] += 1;
  }
  return cell;
}

}  // namespace gale
