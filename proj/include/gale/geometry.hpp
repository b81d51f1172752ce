#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gale/types.hpp"

namespace gale {

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

}  // namespace detail

// Indices ordered so that p[pi(0)] >= p[pi(1)] >= ...; ties keep the smaller index first.
template <typename Derived>
Permutation sort_permutation(const Eigen::MatrixBase<Derived>& p) {
  const int n = static_cast<int>(p.size());
  require_dimension(n, "sort_permutation");
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::stable_sort(order.begin(), order.begin() + n, [&](int a, int b) { return p[a] > p[b]; });
  return Permutation(std::span<const int>(order.data(), static_cast<size_t>(n)));
}

// Ascending counterpart, used for simplex points (x[s(0)] <= x[s(1)] <= ...).
template <typename Derived>
Permutation sort_permutation_ascending(const Eigen::MatrixBase<Derived>& x) {
  const int n = static_cast<int>(x.size());
  require_dimension(n, "sort_permutation_ascending");
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::stable_sort(order.begin(), order.begin() + n, [&](int a, int b) { return x[a] < x[b]; });
  return Permutation(std::span<const int>(order.data(), static_cast<size_t>(n)));
}

template <typename Derived>
bool in_price_domain(const Eigen::MatrixBase<Derived>& p, double tol = kTol) {
  if (p.size() == 0 || !p.allFinite()) return false;
  return p.minCoeff() >= -tol && p.maxCoeff() <= 1.0 + tol && p.minCoeff() <= tol;
}

template <typename Derived>
bool in_simplex(const Eigen::MatrixBase<Derived>& x, double tol = kTol) {
  if (x.size() == 0 || !x.allFinite()) return false;
  return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

// Clip to [0,1] and force the smallest entry to exactly zero.
template <typename Derived>
VectorN<typename Derived::Scalar> project_price_domain(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  VectorN<Scalar> q = p.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
  Eigen::Index arg;
  q.minCoeff(&arg);
  q[arg] = Scalar(0);
  return q;
}

// Clamp tiny negatives and renormalise.
template <typename Derived>
VectorN<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  VectorN<Scalar> y = x.cwiseMax(Scalar(0));
  const Scalar s = y.sum();
  if (s > Scalar(0)) y /= s;
  return y;
}

// Piecewise-linear homeomorphism from the price domain onto the simplex.
// Prices sorted descending become simplex mass sorted ascending.
template <typename Derived>
VectorN<typename Derived::Scalar> phi(const Eigen::MatrixBase<Derived>& price) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(price.size());
  require_dimension(n, "phi");
  detail::require_finite(price, "phi");
  if (!in_price_domain(price)) throw DomainError("phi: prices outside the price domain");

  const VectorN<Scalar> p = project_price_domain(price);
  const Permutation order = sort_permutation(p);
  VectorN<Scalar> x(n);
  Scalar acc = (Scalar(1) - p[order[0]]) / Scalar(n);
  x[order[0]] = acc;
  for (int k = 1; k < n; ++k) {
    acc += (p[order[k - 1]] - p[order[k]]) / Scalar(n - k);
    x[order[k]] = acc;
  }
  return x;
}

template <typename Derived>
VectorN<typename Derived::Scalar> phi_inverse(const Eigen::MatrixBase<Derived>& mass) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(mass.size());
  require_dimension(n, "phi_inverse");
  detail::require_finite(mass, "phi_inverse");
  if (!in_simplex(mass)) throw DomainError("phi_inverse: point outside the simplex");

  const VectorN<Scalar> x = project_simplex(mass);
  const Permutation order = sort_permutation_ascending(x);
  VectorN<Scalar> p(n);
  Scalar below = 0;
  for (int k = 0; k < n; ++k) {
    const int idx = order[k];
    p[idx] = Scalar(1) - below - Scalar(n - k) * x[idx];
    below += x[idx];
  }
  p[order[n - 1]] = Scalar(0);
  return p.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar l1_distance(const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("l1_distance: sizes " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  return (a - b).template lpNorm<1>();
}

}  // namespace gale
