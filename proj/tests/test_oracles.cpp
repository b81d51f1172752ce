#include <doctest.h>

#include <random>
#include <thread>

#include "gale/errors.hpp"
#include "gale/geometry.hpp"
#include "gale/oracles.hpp"
#include "gale/verify.hpp"
#include "reference.hpp"

using namespace gale;

namespace {

Eigen::MatrixXd values2() {
  Eigen::MatrixXd v(2, 2);
  v << 0.9, 0.1, 0.1, 0.9;
  return v;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("quasilinear preference examples") {
  const auto inst = make_quasilinear_market(values2());
  CHECK(query_preference(inst, 0, make_point({0, 0}), 0));
  CHECK_FALSE(query_preference(inst, 0, make_point({0.85, 0}), 0));
  // tie at p = (0.8, 0): both houses give utility 0.1
  CHECK(query_preference(inst, 0, make_point({0.8, 0}), 0));
  CHECK(query_preference(inst, 0, make_point({0.8, 0}), 1));
  CHECK(query_preference(inst, 0, make_point({0.8, 0}), kNothing));
}

TEST_CASE("quasilinear agrees with a direct demand evaluation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int n = 1; n <= 5; ++n) {
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = u(rng);
    const auto inst = make_quasilinear_market(v);
    for (int t = 0; t < 200; ++t) {
      const ref::Vec p = ref::random_prices(n, rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(query_preference(inst, i, Point(p), j) == ref::demands(v, i, p, j));
    }
  }
}

TEST_CASE("quasilinear single agent and identical rows") {
  Eigen::MatrixXd one(1, 1);
  one << 0.5;
  const auto single = make_quasilinear_market(one);
  CHECK(query_preference(single, 0, make_point({0.5}), 0));
  CHECK(query_preference(single, 0, make_point({0.3}), 0));
  CHECK_FALSE(query_preference(single, 0, make_point({0.6}), 0));

  Eigen::MatrixXd same(3, 3);
  same << 0.2, 0.5, 0.7, 0.2, 0.5, 0.7, 0.2, 0.5, 0.7;
  const auto shared = make_quasilinear_market(same);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const Point p(ref::random_prices(3, rng));
    for (int j = 0; j < 3; ++j) {
      const bool a = query_preference(shared, 0, p, j);
      CHECK(query_preference(shared, 1, p, j) == a);
      CHECK(query_preference(shared, 2, p, j) == a);
    }
  }
}

TEST_CASE("quasilinear rejects values outside (0,1)") {
  Eigen::MatrixXd v(2, 2);
  v << 0.5, 1.0, 0.2, 0.3;
  CHECK_THROWS_AS(make_quasilinear_market(v), InvalidValues);
  v(0, 1) = 0.0;
  CHECK_THROWS_AS(make_quasilinear_market(v), InvalidValues);
  CHECK_THROWS_AS(make_quasilinear_market(Eigen::MatrixXd(2, 3)), InvalidValues);
}

TEST_CASE("query index errors") {
  const auto inst = make_quasilinear_market(values2());
  CHECK_THROWS_AS(query_preference(inst, 2, make_point({0, 0}), 0), IndexOutOfRange);
  CHECK_THROWS_AS(query_preference(inst, 0, make_point({0, 0}), 2), IndexOutOfRange);
  CHECK_THROWS_AS(query_preference(inst, -1, make_point({0, 0}), 0), IndexOutOfRange);
  const auto cov = make_weighted_argmax_rkkm({make_point({1, 2, 3}), make_point({1, 1, 1}), make_point({3, 2, 1})});
  CHECK_THROWS_AS(query_covering(cov, 3, make_point({1, 0, 0}), 0), IndexOutOfRange);
  CHECK_THROWS_AS(query_covering(cov, 0, make_point({1, 0, 0}), 3), IndexOutOfRange);
  CHECK_THROWS_AS(query_covering(cov, 0, make_point({0.6, 0.6, 0}), 0), DomainError);
}

TEST_CASE("weighted argmax covering examples") {
  const auto cov = make_weighted_argmax_rkkm({make_point({1, 2, 3}), make_point({1, 2, 3}), make_point({1, 2, 3})});
  const Point x = make_point({0.2, 0.3, 0.5});
  CHECK(query_covering(cov, 0, x, 0));
  CHECK_FALSE(query_covering(cov, 0, x, 1));
  CHECK_FALSE(query_covering(cov, 0, x, 2));
  const Point common = make_point({1.0 / 6, 2.0 / 6, 3.0 / 6});
  for (int j = 0; j < 3; ++j) CHECK(query_covering(cov, 0, common, j));

  const auto even = make_weighted_argmax_covering(make_point({1, 1, 1}));
  CHECK(query_kkm_covering(even, make_point({1, 0, 0}), 0));
  CHECK_FALSE(query_kkm_covering(even, make_point({1, 0, 0}), 1));
  CHECK_FALSE(query_kkm_covering(even, make_point({1, 0, 0}), 2));
  const auto pair = make_weighted_argmax_covering(make_point({1, 1}));
  CHECK(query_kkm_covering(pair, make_point({0.6, 0.4}), 0));
  CHECK_FALSE(query_kkm_covering(pair, make_point({0.4, 0.6}), 0));
  CHECK_THROWS_AS(make_weighted_argmax_covering(make_point({1, 0})), InvalidWeights);
  CHECK_THROWS_AS(make_weighted_argmax_covering(make_point({1, -2})), InvalidWeights);
}

TEST_CASE("property: generator families pass their assumption checks") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 0.95), w(0.2, 5.0);
  for (int n = 2; n <= 5; ++n) {
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = u(rng);
    CHECK(check_gale_assumptions(make_quasilinear_market(v), 400, n).passed);
    std::vector<Point> weights(n, Point(n));
    for (auto& row : weights)
      for (int k = 0; k < n; ++k) row[k] = w(rng);
    const auto cov = make_weighted_argmax_rkkm(weights);
    CHECK(check_kkm_covering(cov, 40, n).passed);
    CHECK(check_sparseness(cov, 200, n).passed);
  }
}

TEST_CASE("piecewise cake utilities") {
  const auto cake = make_piecewise_cake({{{0, 1, 1}}, {{0, 0.5, 1.5}, {0.5, 1, 0.5}}});
  CHECK(eval_cake_utility(cake, 0, 0.2, 0.5) == doctest::Approx(0.3));
  CHECK(eval_cake_utility(cake, 1, 0.25, 0.75) == doctest::Approx(0.5));
  CHECK(cake.lipschitz == doctest::Approx(1.5));
  CHECK(eval_cake_utility(cake, 0, 0.4, 0.4) == 0.0);
  CHECK(eval_cake_utility(cake, 1, 0.7, 0.7) == 0.0);
  CHECK_THROWS_AS(eval_cake_utility(cake, 0, 0.6, 0.4), InvalidInterval);
  CHECK_THROWS_AS(eval_cake_utility(cake, 0, -0.1, 0.4), InvalidInterval);
  CHECK_THROWS_AS(eval_cake_utility(cake, 2, 0.1, 0.4), IndexOutOfRange);
}

TEST_CASE("piecewise cake agrees with a reference integral") {
  std::vector<ref::Piece> f{{0, 0.3, 2.0}, {0.3, 0.35, 0.1}, {0.35, 1, 1.2}};
  std::vector<DensitySegment> segs;
  for (const auto& p : f) segs.push_back({p.from, p.to, p.density});
  const auto cake = make_piecewise_cake({segs});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 500; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(eval_cake_utility(cake, 0, a, b) == doctest::Approx(ref::integral(f, a, b)).epsilon(1e-12));
  }
}

TEST_CASE("piecewise cake rejects bad densities") {
  CHECK_THROWS_AS(make_piecewise_cake({{{0, 0.4, 1}, {0.5, 1, 1}}}), InvalidDensity);   // gap
  CHECK_THROWS_AS(make_piecewise_cake({{{0, 0.6, 1}, {0.5, 1, 1}}}), InvalidDensity);   // overlap
  CHECK_THROWS_AS(make_piecewise_cake({{{0, 1, 0}}}), InvalidDensity);                   // zero
  CHECK_THROWS_AS(make_piecewise_cake({{{0, 1, -1}}}), InvalidDensity);
  CHECK_THROWS_AS(make_piecewise_cake({{{0, 0.9, 1}}}), InvalidDensity);                 // short
  CHECK(check_cake_assumptions(make_piecewise_cake({{{0, 0.5, 1.5}, {0.5, 1, 0.5}}, {{0, 1, 1}}}), 300, 1).passed);
}

TEST_CASE("ledger counts exactly") {
  const auto inst = make_quasilinear_market(values2());
  for (int k = 0; k < 7; ++k) query_preference(inst, 1, make_point({0, 0}), 0);
  for (int k = 0; k < 3; ++k) query_preference(inst, 0, make_point({0, 0}), kNothing);
  const auto& ledger = *inst.account.ledger;
  CHECK(ledger.count("preference[1]") == 7);
  CHECK(ledger.count("preference[0]") == 3);
  CHECK(ledger.total() == 10);
  CHECK(ledger.total("preference") == 10);
  CHECK(ledger.count("missing") == 0);
}

TEST_CASE("property: ledger is exact under concurrent callers") {
  const auto cov = make_weighted_argmax_rkkm({make_point({1, 2}), make_point({2, 1})});
  constexpr int kThreads = 4;
  constexpr int kEach = 5000;
  std::vector<std::thread> pool;
  for (int t = 0; t < kThreads; ++t) {
    pool.emplace_back([&cov, t] {
      for (int k = 0; k < kEach; ++k) query_covering(cov, t % 2, make_point({0.5, 0.5}), k % 2);
    });
  }
  for (auto& th : pool) th.join();
  CHECK(cov.account.ledger->count("covering[0]") == 2 * kEach);
  CHECK(cov.account.ledger->count("covering[1]") == 2 * kEach);
}

TEST_CASE("ledger never decreases and stages are fresh") {
  QueryLedger ledger;
  CHECK(ledger.fresh_stage("sparsify") == "sparsify");
  CHECK(ledger.fresh_stage("sparsify") == "sparsify#2");
  CHECK(ledger.fresh_stage("other") == "other");
  auto& c = ledger.counter("x");
  std::uint64_t last = 0;
  for (int k = 0; k < 50; ++k) {
    c.fetch_add(1);
    CHECK(ledger.count("x") >= last);
    last = ledger.count("x");
  }
}

TEST_CASE("memoized wrappers count oracle hits once") {
  const auto inst = make_weighted_argmax_rkkm({make_point({1, 2, 3}), make_point({1, 2, 3}), make_point({1, 2, 3})});
  const auto cached = memoized(inst);
  for (int k = 0; k < 5; ++k) CHECK(query_covering(cached, 0, make_point({0.2, 0.3, 0.5}), 0));
  CHECK(inst.account.ledger->count("covering[0]") == 1);
  CHECK(inst.account.ledger->count("memo/covering[0]") == 5);
}

TEST_CASE("sperner grids and flat indices") {
  // N = 2 triangle: rows (v0 = 0: v1 = 0..2), (v0 = 1: 0..1), (v0 = 2: 0)
  const auto tri = make_sperner_triangle(2, std::vector<int>{2, 2, 1, 2, 1, 0});
  CHECK(query_color(tri, make_lattice({2, 0, 0})) == 0);
  CHECK(query_color(tri, make_lattice({0, 2, 0})) == 1);
  CHECK(query_color(tri, make_lattice({0, 0, 2})) == 2);
  CHECK(query_color(tri, make_lattice({1, 1, 0})) == 1);
  CHECK_THROWS_AS(query_color(tri, make_lattice({1, 0, 0})), DomainError);
  CHECK_THROWS_AS(make_sperner_triangle(2, std::vector<int>{0, 1}), InputError);
  CHECK_THROWS_AS(make_sperner_triangle(2, std::vector<int>{0, 1, 2, 3, 0, 0}), InputError);

  int idx = 0;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) CHECK(triangle_index(5, make_lattice({a, b, 5 - a - b})) == std::size_t(idx++));
  for (std::size_t i = 0; i < 64; ++i) CHECK(cube_index(3, cube_vertex(3, 3, i)) == i);
  CHECK(cube_vertex(2, 3, 1) == make_lattice({0, 1}));   // last coordinate fastest
  CHECK(tri.account.ledger->count("color") == 4);
}

}
