#include <doctest.h>

#include "gale/errors.hpp"
#include "gale/geometry.hpp"
#include "gale/solvers.hpp"
#include "gale/verify.hpp"

using namespace gale;

namespace {

RkkmInstance argmax123() {
  return make_weighted_argmax_rkkm({make_point({1, 2, 3}), make_point({1, 2, 3}), make_point({1, 2, 3})});
}

HousingInstance housing_from(PreferenceOracle f, int n) { return make_housing_instance(n, std::move(f), {}); }

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("solver output passes") {
  const auto cov = argmax123();
  const Solution sol = solve_rkkm(cov, 0.1);
  const Report r = verify_solution(cov, sol, 0.1);
  CHECK(r.passed);
  CHECK(r.violations.empty());
}

TEST_CASE("tampered witness fails with a distance violation") {
  const auto cov = argmax123();
  const double eps = 0.1;
  Solution sol = solve_rkkm(cov, eps);
  // move witness 0 by 2 eps inside the simplex
  Point moved = sol.witnesses[0];
  Eigen::Index hi, lo;
  moved.maxCoeff(&hi);
  moved.minCoeff(&lo);
  moved[hi] -= eps;
  moved[lo] += eps;
  sol.witnesses[0] = moved;
  const Report r = verify_solution(cov, sol, eps);
  CHECK_FALSE(r.passed);
  CHECK(r.has("distance"));
}

TEST_CASE("tampered permutation fails with a bijection violation") {
  const auto cov = argmax123();
  Solution sol = solve_rkkm(cov, 0.1);
  sol.perm[1] = sol.perm[0];
  const Report r = verify_solution(cov, sol, 0.1);
  CHECK_FALSE(r.passed);
  CHECK(r.has("bijection"));
}

TEST_CASE("witness outside its set fails with a membership violation") {
  const auto cov = argmax123();
  Solution sol;
  sol.point = make_point({1, 0, 0});
  sol.perm = {2, 1, 0};
  sol.witnesses = {sol.point, sol.point, sol.point};
  const Report r = verify_solution(cov, sol, 0.1);
  CHECK(r.has("membership"));
}

TEST_CASE("missing witnesses throw") {
  const auto cov = argmax123();
  Solution sol = solve_rkkm(cov, 0.1);
  sol.witnesses.pop_back();
  CHECK_THROWS_AS(verify_solution(cov, sol, 0.1), MissingWitnesses);
}

TEST_CASE("housing solution with prices off the domain fails") {
  Eigen::MatrixXd v(2, 2);
  v << 0.9, 0.1, 0.1, 0.9;
  const auto market = make_quasilinear_market(v);
  Solution sol = solve_housing(market, 0.1);
  sol.point = make_point({0.5, 0.5});
  sol.witnesses = {sol.point, sol.point};
  const Report r = verify_solution(market, sol, 0.1);
  CHECK_FALSE(r.passed);
  CHECK(r.has("domain"));
}

TEST_CASE("cake envy check") {
  const auto cake = make_piecewise_cake({{{0, 0.5, 1.5}, {0.5, 1, 0.5}}, {{0, 1, 1}}, {{0, 1, 1}}});
  const Solution good = solve_cake(cake, 0.1);
  const auto before = cake.account.ledger->total("utility");
  CHECK(verify_solution(cake, good, 0.1).passed);
  CHECK(cake.account.ledger->total("utility") - before == 9);

  Solution bad;
  bad.point = make_point({0.8, 0.1, 0.1});
  bad.perm = {1, 0, 2};  // player 0 gets a sliver, player 1 the big piece
  const Report r = verify_solution(cake, bad, 0.1);
  CHECK_FALSE(r.passed);
  CHECK(r.has("envy"));
  bad.perm = {0, 0, 2};
  CHECK(verify_solution(cake, bad, 0.1).has("bijection"));
}

TEST_CASE("kkm covering check") {
  const auto good = make_weighted_argmax_covering(make_point({1, 2, 3}));
  CHECK(check_kkm_covering(good, 50, 1).passed);
  const Report none = check_kkm_covering([](const Point&, int) { return false; }, 3, 5, 1);
  CHECK_FALSE(none.passed);
  CHECK(none.has("kkm_covering"));
  // every face sample fails: 7 faces; vertex faces give one point each
  CHECK(none.violations.size() == 3 + 3 * 5 + 5);
  // n = 1: the single vertex must be in set 0
  CHECK(check_kkm_covering([](const Point&, int s) { return s == 0; }, 1, 5, 1).passed);
  CHECK_FALSE(check_kkm_covering([](const Point&, int) { return false; }, 1, 5, 1).passed);
  CHECK_THROWS_AS(check_kkm_covering([](const Point&, int) { return true; }, 13, 1, 1), TooManySubsets);
}

TEST_CASE("sparseness check") {
  CHECK(check_sparseness(argmax123(), 200, 2).passed);
  const Report all = check_sparseness([](const Point&, int) { return true; }, 3, 50, 2);
  CHECK_FALSE(all.passed);
  CHECK(all.has("sparseness"));
}

TEST_CASE("Gale assumption checks") {
  Eigen::MatrixXd v(3, 3);
  v << 0.3, 0.6, 0.2, 0.5, 0.5, 0.5, 0.1, 0.2, 0.9;
  const Report ok = check_gale_assumptions(make_quasilinear_market(v), 500, 3);
  CHECK(ok.passed);
  CHECK_FALSE(ok.notes.empty());

  const auto greedy = housing_from([](int, const Point&, int) { return true; }, 3);
  const Report ii = check_gale_assumptions(greedy, 200, 3);
  CHECK_FALSE(ii.passed);
  CHECK(ii.has("assumption_ii"));

  const auto idle = housing_from([](int, const Point&, int house) { return house == kNothing; }, 3);
  const Report iii = check_gale_assumptions(idle, 200, 3);
  CHECK_FALSE(iii.passed);
  CHECK(iii.has("assumption_iii"));
}

TEST_CASE("Sperner colouring checks") {
  const auto zero = make_sperner_cube(2, 4, [](const Lattice&) { return 0; });
  const Report cube = check_sperner_coloring(zero);
  CHECK_FALSE(cube.passed);
  CHECK(cube.has("boundary_full"));

  // triangle corner N e0 must carry colour 0
  const auto wrong_corner = make_sperner_triangle(2, std::vector<int>{2, 2, 1, 2, 1, 1});
  const Report tri = check_sperner_coloring(wrong_corner);
  CHECK_FALSE(tri.passed);
  CHECK(tri.has("boundary"));
  CHECK(check_sperner_coloring(make_sperner_triangle(2, std::vector<int>{2, 2, 1, 2, 1, 0})).passed);

  // large-simplex rule: colour inside the barycentric support
  CHECK_FALSE(check_large_simplex_coloring(zero).passed);
  CHECK(check_large_simplex_coloring(zero).has("large_simplex_support"));
}

TEST_CASE("tampered Sperner solutions") {
  const auto line = make_sperner_cube(1, 4, std::vector<int>{0, 0, 0, 1, 1});
  SpernerSolution sol = solve_sperner_bruteforce(line);
  CHECK(verify_solution(line, sol).passed);
  SpernerSolution recolored = sol;
  recolored.colors[0] = 1;
  CHECK(verify_solution(line, recolored).has("color_mismatch"));
  SpernerSolution shifted = sol;
  shifted.cell.anchor = make_lattice({0});
  shifted.vertices = {make_lattice({0}), make_lattice({1})};
  shifted.colors = {0, 0};
  CHECK(verify_solution(line, shifted).has("not_panchromatic"));
  SpernerSolution broken = sol;
  broken.vertices[1] = make_lattice({4});
  CHECK(verify_solution(line, broken).has("cell"));

  const auto tri = make_sperner_triangle(4, [](const Lattice& v) { return v[2] > 0 ? 2 : (v[0] >= 2 ? 0 : 1); });
  TriangleSolution t = solve_sperner_triangle(tri);
  CHECK(verify_solution(tri, t).passed);
  t.cell.vertices = {make_lattice({4, 0, 0}), make_lattice({3, 1, 0}), make_lattice({3, 0, 1})};
  t.colors = {0, 0, 2};
  t.trichromatic = false;
  CHECK(verify_solution(tri, t).has("not_trichromatic"));
  t.cell.vertices[2] = make_lattice({1, 1, 2});
  CHECK(verify_solution(tri, t).has("cell"));
}

TEST_CASE("cake assumption checks") {
  const auto cake = make_piecewise_cake({{{0, 0.5, 1.5}, {0.5, 1, 0.5}}});
  CHECK(check_cake_assumptions(cake, 200, 1).passed);
  const auto lying = make_cake_instance(1, 0.5, [](int, double a, double b) { return 3 * (b - a); }, {});
  CHECK(check_cake_assumptions(lying, 200, 1).has("lipschitz"));
  const auto hungry = make_cake_instance(1, 1, [](int, double a, double b) { return b > 0.5 && a < b ? b - a : 0.0; }, {});
  CHECK(check_cake_assumptions(hungry, 200, 1).has("hungriness"));
}

TEST_CASE("face sampling is deterministic and on the face") {
  for (auto mode : {Sampling::LowDiscrepancy, Sampling::Uniform}) {
    const auto a = sample_face(5, 0b10110, 40, 7, mode);
    const auto b = sample_face(5, 0b10110, 40, 7, mode);
    REQUIRE(a.size() == 40);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == b[k]);
      CHECK(in_simplex(a[k]));
      CHECK(a[k][0] == 0.0);
      CHECK(a[k][3] == 0.0);
    }
    CHECK(sample_face(5, 0b10110, 40, 8, mode)[3] != a[3]);
  }
  CHECK(sample_face(4, 0b0100, 10, 1).size() == 1);
}

TEST_CASE("reports serialise") {
  Report r;
  r.fail("distance", nlohmann::json{{"agent", 1}}, "too far");
  const auto j = r.to_json();
  CHECK(j["passed"] == false);
  CHECK(j["violations"][0]["check"] == "distance");
  Report other;
  other.merge(r);
  CHECK_FALSE(other.passed);
}

}
