#include <doctest.h>

#include <random>

#include "gale/errors.hpp"
#include "gale/geometry.hpp"
#include "reference.hpp"

using namespace gale;

namespace {

Point from_ref(const ref::Vec& v) { return Point(v); }
ref::Vec to_ref(const Point& p) { return ref::Vec(p); }

bool close(const Point& a, const Point& b, double tol = 1e-12) { return l1_distance(a, b) <= tol; }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("sort_permutation is descending and stable") {
  CHECK(sort_permutation(make_point({0.2, 0.9, 0.0})).to_vector() == std::vector<int>{1, 0, 2});
  CHECK(sort_permutation(make_point({0.5, 0.5})).to_vector() == std::vector<int>{0, 1});
  CHECK(sort_permutation(make_point({0, 0, 0})).to_vector() == std::vector<int>{0, 1, 2});
}

TEST_CASE("phi on hand-evaluated points") {
  CHECK(close(phi(make_point({0, 0, 0})), make_point({1.0 / 3, 1.0 / 3, 1.0 / 3})));
  CHECK(close(phi(make_point({1, 0, 0})), make_point({0, 0.5, 0.5})));
  CHECK(close(phi(make_point({1, 1, 0})), make_point({0, 0, 1})));
}

TEST_CASE("phi_inverse on hand-evaluated points") {
  CHECK(close(phi_inverse(make_point({1.0 / 3, 1.0 / 3, 1.0 / 3})), make_point({0, 0, 0}), 1e-12));
  CHECK(close(phi_inverse(make_point({0, 0.5, 0.5})), make_point({1, 0, 0}), 1e-12));
  CHECK(close(phi_inverse(make_point({1.0 / 6, 1.0 / 3, 0.5})), make_point({0.5, 1.0 / 6, 0}), 1e-12));
}

TEST_CASE("l1_distance") {
  CHECK(l1_distance(make_point({0, 1}), make_point({1, 0})) == doctest::Approx(2.0));
  const Point x = make_point({0.3, 0.7});
  CHECK(l1_distance(x, x) == 0.0);
  CHECK(l1_distance(make_point({0.2, 0.3, 0.5}), make_point({0.25, 0.3, 0.45})) == doctest::Approx(0.1));
  CHECK_THROWS_AS(l1_distance(make_point({0, 1}), make_point({0, 1, 0})), DimensionMismatch);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(phi(make_point({0.5, 0.5})), DomainError);       // no zero entry
  CHECK_THROWS_AS(phi(make_point({1.5, 0.0})), DomainError);       // above 1
  CHECK_THROWS_AS(phi(make_point({-0.1, 0.0})), DomainError);
  CHECK_THROWS_AS(phi_inverse(make_point({0.5, 0.6})), DomainError);
  CHECK_THROWS_AS(phi_inverse(make_point({1.2, -0.2})), DomainError);
  // within tolerance is projected, not rejected
  CHECK_NOTHROW(phi(make_point({0.5, 5e-10})));
  CHECK_NOTHROW(phi_inverse(make_point({0.5, 0.5 + 5e-10})));
}

TEST_CASE("phi agrees with the reference oracle") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 300; ++t) {
      const ref::Vec p = ref::random_prices(n, rng);
      CHECK(l1_distance(phi(from_ref(p)), from_ref(ref::phi(p))) <= 1e-12);
      const ref::Vec x = ref::random_simplex(n, rng);
      if (n > 1) CHECK(l1_distance(phi_inverse(from_ref(x)), from_ref(ref::phi_inverse(x))) <= 1e-9);
    }
  }
}

TEST_CASE("property: round trips") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 8; ++n) {
    for (int t = 0; t < 500; ++t) {
      const Point p = from_ref(ref::random_prices(n, rng));
      CHECK(l1_distance(phi_inverse(phi(p)), p) <= 1e-9);
      const Point x = from_ref(ref::random_simplex(n, rng));
      CHECK(l1_distance(phi(phi_inverse(x)), x) <= 1e-9);
    }
  }
}

TEST_CASE("property: images stay in their domains and keep the sort region") {
  std::mt19937_64 rng(6);
  for (int n = 2; n <= 8; ++n) {
    for (int t = 0; t < 300; ++t) {
      const Point p = from_ref(ref::random_prices(n, rng));
      const Point x = phi(p);
      CHECK(in_simplex(x));
      // sorted descending prices become ascending mass
      const Permutation order = sort_permutation(p);
      for (int k = 1; k < n; ++k) CHECK(x[order[k - 1]] <= x[order[k]] + 1e-15);
      CHECK(in_price_domain(phi_inverse(from_ref(ref::random_simplex(n, rng)))));
    }
  }
}

TEST_CASE("property: Lipschitz constants n and n^2") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 8; ++n) {
    for (int t = 0; t < 500; ++t) {
      const Point p = from_ref(ref::random_prices(n, rng));
      const Point q = from_ref(ref::random_prices(n, rng));
      CHECK(l1_distance(phi(p), phi(q)) <= n * l1_distance(p, q) + 1e-12);
      const Point x = from_ref(ref::random_simplex(n, rng));
      const Point y = from_ref(ref::random_simplex(n, rng));
      CHECK(l1_distance(phi_inverse(x), phi_inverse(y)) <= n * n * l1_distance(x, y) + 1e-12);
    }
  }
}

TEST_CASE("property: corners map to unit vectors") {
  for (int n = 2; n <= 6; ++n) {
    for (int last = 0; last < n; ++last) {
      Point p = Point::Ones(n);
      p[last] = 0;
      Point e = Point::Zero(n);
      e[last] = 1;
      CHECK(close(phi(p), e));
    }
  }
}

TEST_CASE("phi is independent of the tie-break") {
  // tied prices: either order gives the same image
  const Point p = make_point({0.4, 0.4, 0.0, 0.4});
  const ref::Vec swapped = to_ref(make_point({0.4, 0.4, 0.0, 0.4}));
  CHECK(close(phi(p), from_ref(ref::phi(swapped))));
}

TEST_CASE("float scalar instantiation") {
  Eigen::Vector3f p(1.0f, 0.0f, 0.0f);
  const auto x = phi(p);
  CHECK(x[1] == doctest::Approx(0.5f));
  CHECK(phi_inverse(x)[0] == doctest::Approx(1.0f));
}

}
