#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gale/errors.hpp"

namespace gale {

// Upper bound on every dimension handled by the library. Points live on the
// stack so that deeply nested oracle chains never touch the allocator.
inline constexpr int kMaxDim = 16;

// Membership tolerance for Sigma_n and the simplex.
inline constexpr double kTol = 1e-9;

template <typename Scalar>
using VectorN = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using Point = VectorN<double>;
// Prices in Sigma_n: entries in [0,1], at least one of them zero.
using PriceVector = Point;
// Barycentric mass on the standard simplex.
using SimplexPoint = Point;
// Integer lattice vertex.
using Lattice = VectorN<int>;

inline void require_dimension(int n, const char* what) {
  if (n < 1 || n > kMaxDim) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(n) +
                      " outside [1, " + std::to_string(kMaxDim) + "]");
  }
}

inline Point make_point(std::initializer_list<double> values) {
  Point p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p[i++] = v;
  return p;
}

template <typename Container>
Point make_point(const Container& values) {
  Point p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p[i++] = v;
  return p;
}

inline Lattice make_lattice(std::initializer_list<int> values) {
  Lattice v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (int x : values) v[i++] = x;
  return v;
}

inline std::vector<double> to_std(const Point& p) { return {p.data(), p.data() + p.size()}; }
inline std::vector<int> to_std(const Lattice& v) { return {v.data(), v.data() + v.size()}; }

// A bijection of {0, ..., n-1}. Image i is where i is sent.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::span<const int> image) : size_(static_cast<int>(image.size())) {
    require_dimension(size_, "Permutation");
    std::array<bool, kMaxDim> seen{};
    for (int i = 0; i < size_; ++i) {
      int v = image[i];
      if (v < 0 || v >= size_ || seen[v]) {
        throw DomainError("Permutation: image is not a bijection");
      }
      seen[v] = true;
      image_[i] = v;
    }
  }

  Permutation(std::initializer_list<int> image)
      : Permutation(std::span<const int>(image.begin(), image.size())) {}

  static Permutation identity(int n) {
    require_dimension(n, "Permutation::identity");
    Permutation p;
    p.size_ = n;
    for (int i = 0; i < n; ++i) p.image_[i] = i;
    return p;
  }

  int size() const { return size_; }
  int operator()(int i) const { return image_[i]; }
  int operator[](int i) const { return image_[i]; }

  std::span<const int> image() const { return {image_.data(), static_cast<size_t>(size_)}; }
  std::vector<int> to_vector() const { return {image_.begin(), image_.begin() + size_}; }

  Permutation inverse() const {
    Permutation inv;
    inv.size_ = size_;
    for (int i = 0; i < size_; ++i) inv.image_[image_[i]] = i;
    return inv;
  }

  // Advances to the lexicographically next permutation; false after the last one.
  bool next() { return std::next_permutation(image_.begin(), image_.begin() + size_); }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.size_ == b.size_ && std::equal(a.image_.begin(), a.image_.begin() + a.size_, b.image_.begin());
  }
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    return std::lexicographical_compare_three_way(a.image_.begin(), a.image_.begin() + a.size_,
                                                  b.image_.begin(), b.image_.begin() + b.size_);
  }

 private:
  std::array<int, kMaxDim> image_{};
  int size_ = 0;
};

inline bool is_bijection(std::span<const int> image) {
  std::vector<bool> seen(image.size(), false);
  for (int v : image) {
    if (v < 0 || v >= static_cast<int>(image.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

using LedgerSnapshot = std::map<std::string, std::uint64_t>;

// A point (prices, simplex point, or cut) with an assignment and one witness
// per agent: witness i lies in agent i's set number perm[i].
struct Solution {
  Point point;
  std::vector<int> perm;  // kept raw so that tampered assignments can be verified
  std::vector<Point> witnesses;
  double epsilon_achieved = 0.0;
  LedgerSnapshot ledger;
};

}  // namespace gale
