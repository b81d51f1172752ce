#pragma once

// Slow, independent re-derivations used as test oracles. Nothing here calls
// into the library's geometry or triangulation code.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ref {

using Vec = Eigen::VectorXd;
using IVec = Eigen::VectorXi;

// Positions sorted by value, descending, original index breaking ties.
inline std::vector<int> order_desc(const Vec& p) {
  std::vector<std::pair<double, int>> keyed;
  for (int i = 0; i < p.size(); ++i) keyed.emplace_back(-p[i], i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& [_, i] : keyed) out.push_back(i);
  return out;
}

// Closed-form sum for phi on the region where p is sorted by `order`.
inline Vec phi(const Vec& p) {
  const int n = static_cast<int>(p.size());
  const auto order = order_desc(p);
  Vec x(n);
  for (int k = 0; k < n; ++k) {
    long double v = (1.0L - p[order[0]]) / n;
    for (int l = 1; l <= k; ++l) v += static_cast<long double>(p[order[l - 1]] - p[order[l]]) / (n - l);
    x[order[k]] = static_cast<double>(v);
  }
  return x;
}

// Inverse by a dense linear solve: on the region given by the ascending order
// of x, phi is affine in the free prices (the last one is pinned to zero).
inline Vec phi_inverse(const Vec& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> asc(n);
  std::iota(asc.begin(), asc.end(), 0);
  std::stable_sort(asc.begin(), asc.end(), [&](int a, int b) { return x[a] < x[b]; });
  // unknowns q_k = p[asc[k]] for k < n-1; equations: x[asc[k]] for k < n-1
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 1, n - 1);
  Vec rhs(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    // x_k = (1 - q_0)/n + sum_{l=1..k} (q_{l-1} - q_l)/(n-l), with q_{n-1} = 0
    rhs[k] = x[asc[k]] - 1.0 / n;
    A(k, 0) -= 1.0 / n;
    for (int l = 1; l <= k; ++l) {
      A(k, l - 1) += 1.0 / (n - l);
      if (l < n - 1) A(k, l) -= 1.0 / (n - l);
    }
  }
  Vec q = A.fullPivLu().solve(rhs);
  Vec p = Vec::Zero(n);
  for (int k = 0; k < n - 1; ++k) p[asc[k]] = q[k];
  return p;
}

// Barycentric coordinates of v against the large simplex picked by sorting v,
// via least squares on the vertex matrix.
inline Vec barycentric(const IVec& v, int N) {
  const int d = static_cast<int>(v.size());
  const auto order = order_desc(v.cast<double>());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d + 1, d + 1);
  Vec corner = Vec::Zero(d);
  for (int k = 0; k <= d; ++k) {
    if (k > 0) corner[order[k - 1]] += N;
    M.block(0, k, d, 1) = corner;
    M(d, k) = 1.0;
  }
  Vec rhs(d + 1);
  rhs.head(d) = v.cast<double>();
  rhs[d] = 1.0;
  return M.colPivHouseholderQr().solve(rhs);
}

inline int label(const IVec& v, int N) {
  const Vec a = barycentric(v, N);
  long s = 0;
  for (int i = 0; i < a.size(); ++i) s += i * std::lround(a[i] * N);
  return static_cast<int>(s % (a.size()));
}

struct Cell {
  IVec anchor;
  std::vector<int> perm;
};

// Staircase vertices of a cell.
inline std::vector<IVec> cell_vertices(const Cell& c) {
  std::vector<IVec> out{c.anchor};
  for (int k : c.perm) {
    IVec next = out.back();
    next[k] += 1;
    out.push_back(next);
  }
  return out;
}

// Every cell of [0,N]^d in lexicographic (anchor, perm) order.
template <typename Visit>
void for_each_cell(int d, int N, Visit&& visit) {
  IVec anchor = IVec::Zero(d);
  while (true) {
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (!visit(Cell{anchor, perm})) return;
    } while (std::next_permutation(perm.begin(), perm.end()));
    int k = d - 1;
    while (k >= 0 && anchor[k] == N - 1) anchor[k--] = 0;
    if (k < 0) return;
    ++anchor[k];
  }
}

// First cell in scan order that contains x.
inline Cell containing_cell(const Vec& x, int N, double tol = 1e-9) {
  const int d = static_cast<int>(x.size());
  Cell found;
  for_each_cell(d, N, [&](const Cell& c) {
    Vec y = x - c.anchor.cast<double>();
    if (y.minCoeff() < -tol || y.maxCoeff() > 1 + tol) return true;
    for (int k = 1; k < d; ++k) {
      if (y[c.perm[k - 1]] < y[c.perm[k]] - tol) return true;
    }
    found = c;
    return false;
  });
  return found;
}

// All triangle lattice points at minimal L1 distance, by exhaustive scan.
inline std::vector<IVec> nearest_triangle(const Vec& x, int N) {
  double best = 1e300;
  std::vector<IVec> out;
  for (int a = 0; a <= N; ++a) {
    for (int b = 0; a + b <= N; ++b) {
      IVec v(3);
      v << a, b, N - a - b;
      const double dist = (x - v.cast<double>()).cwiseAbs().sum();
      if (dist < best - 1e-9) {
        best = dist;
        out.clear();
      }
      if (dist <= best + 1e-9) out.push_back(v);
    }
  }
  return out;
}

// Quasilinear demand straight from the definition.
inline bool demands(const Eigen::MatrixXd& v, int agent, const Vec& p, int house) {
  const double own = v(agent, house) - p[house];
  if (own < 0) return false;
  for (int k = 0; k < p.size(); ++k) {
    if (v(agent, k) - p[k] > own) return false;
  }
  return true;
}

// Integral of a piecewise density over [a,b] by splitting at breakpoints.
struct Piece {
  double from, to, density;
};
inline double integral(const std::vector<Piece>& f, double a, double b) {
  double s = 0;
  for (const auto& seg : f) {
    const double lo = std::max(a, seg.from), hi = std::min(b, seg.to);
    if (hi > lo) s += (hi - lo) * seg.density;
  }
  return s;
}

inline Vec random_simplex(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = e(rng);
  return x / x.sum();
}

inline Vec random_prices(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = u(rng);
  p[pick(rng)] = 0.0;
  return p;
}

}  // namespace ref
