#include "gale/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "gale/geometry.hpp"
#include "gale/triangulation.hpp"

namespace gale {

using nlohmann::json;

void Report::fail(std::string check, json witness, std::string detail) {
  passed = false;
  violations.push_back({std::move(check), std::move(witness), std::move(detail)});
}

void Report::merge(const Report& other) {
  passed = passed && other.passed;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  for (const auto& note : other.notes) {
    if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(note);
  }
}

bool Report::has(const std::string& check) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.check == check; });
}

json Report::to_json() const {
  json out{{"passed", passed}, {"violations", json::array()}, {"notes", notes}};
  for (const auto& v : violations) {
    out["violations"].push_back(json{{"check", v.check}, {"witness", v.witness}, {"detail", v.detail}});
  }
  return out;
}

namespace {

constexpr std::array<int, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Checks shared by the witness-based solution formats.
bool check_assignment(Report& report, const Solution& sol, int n) {
  if (static_cast<int>(sol.witnesses.size()) != n) {
    throw MissingWitnesses("verify_solution: expected " + std::to_string(n) + " witnesses, got " +
                           std::to_string(sol.witnesses.size()));
  }
  if (static_cast<int>(sol.perm.size()) != n || !is_bijection(sol.perm)) {
    report.fail("bijection", json(sol.perm), "assignment is not a permutation of the agents");
    return false;
  }
  return true;
}

template <typename Member>
void check_witnesses(Report& report, const Solution& sol, int n, double epsilon, Member&& member) {
  for (int i = 0; i < n; ++i) {
    const Point& w = sol.witnesses[i];
    if (w.size() != sol.point.size()) {
      report.fail("dimension", json{{"agent", i}}, "witness dimension differs from the point");
      continue;
    }
    const double dist = l1_distance(sol.point, w);
    if (dist > epsilon + kDistanceSlack) {
      report.fail("distance", json{{"agent", i}, {"witness", to_std(w)}, {"distance", dist}},
                  "witness farther than epsilon from the point");
    }
    try {
      if (!member(i, w, sol.perm[i])) {
        report.fail("membership", json{{"agent", i}, {"set", sol.perm[i]}, {"witness", to_std(w)}},
                    "oracle rejects the witness for the assigned set");
      }
    } catch (const DomainError& e) {
      report.fail("domain", json{{"agent", i}, {"witness", to_std(w)}}, e.what());
    }
  }
}

}  // namespace

Report verify_solution(const HousingInstance& inst, const Solution& sol, double epsilon) {
  Report report;
  if (!check_assignment(report, sol, inst.n)) return report;
  if (sol.point.size() != inst.n) {
    report.fail("dimension", json{{"size", sol.point.size()}}, "price vector has the wrong dimension");
    return report;
  }
  if (!in_price_domain(sol.point)) {
    report.fail("domain", json{{"point", to_std(sol.point)}}, "prices leave [0,1]^n or have no zero entry");
  }
  check_witnesses(report, sol, inst.n, epsilon, [&](int i, const Point& w, int house) {
    if (!in_price_domain(w)) throw DomainError("witness prices outside the price domain");
    return query_preference(inst, i, w, house);
  });
  return report;
}

Report verify_solution(const RkkmInstance& inst, const Solution& sol, double epsilon) {
  Report report;
  if (!check_assignment(report, sol, inst.n)) return report;
  if (sol.point.size() != inst.n || !in_simplex(sol.point)) {
    report.fail("domain", json{{"point", to_std(sol.point)}}, "point is not in the simplex");
  }
  check_witnesses(report, sol, inst.n, epsilon, [&](int i, const Point& w, int set) {
    return query_covering(inst, i, w, set);
  });
  return report;
}

Report verify_solution(const KkmInstance& inst, const Solution& sol, double epsilon) {
  Report report;
  if (!check_assignment(report, sol, inst.n)) return report;
  check_witnesses(report, sol, inst.n, epsilon, [&](int, const Point& w, int set) {
    return query_kkm_covering(inst, w, set);
  });
  return report;
}

Report verify_solution(const CakeInstance& inst, const Solution& sol, double epsilon) {
  Report report;
  const int d = inst.d;
  if (static_cast<int>(sol.perm.size()) != d || !is_bijection(sol.perm)) {
    report.fail("bijection", json(sol.perm), "assignment is not a permutation of the players");
    return report;
  }
  if (sol.point.size() != d || !in_simplex(sol.point)) {
    report.fail("domain", json{{"cut", to_std(sol.point)}}, "cut is not a point of the simplex");
    return report;
  }
  for (int i = 0; i < d; ++i) {
    std::vector<double> value(d);
    for (int k = 0; k < d; ++k) {
      const Interval piece = cut_piece(sol.point, k);
      value[k] = eval_cake_utility(inst, i, piece.a, piece.b);
    }
    const double mine = value[sol.perm[i]];
    for (int k = 0; k < d; ++k) {
      if (value[k] > mine + epsilon + kDistanceSlack) {
        report.fail("envy", json{{"player", i}, {"piece", k}, {"own", mine}, {"other", value[k]}},
                    "player prefers another piece by more than epsilon");
      }
    }
  }
  return report;
}

Report verify_solution(const SpernerInstance& inst, const SpernerSolution& sol) {
  Report report;
  const int d = inst.d;
  if (inst.kind != SpernerKind::Cube) throw DomainError("verify_solution: cube solution for a triangle instance");
  const Cell& cell = sol.cell;
  if (cell.anchor.size() != d || cell.perm.size() != d || cell.anchor.minCoeff() < 0 ||
      cell.anchor.maxCoeff() > inst.N - 1) {
    report.fail("cell", json{{"anchor", to_std(cell.anchor)}}, "not a cell of the grid");
    return report;
  }
  const auto vertices = cell_vertices(cell);
  if (!sol.vertices.empty() && sol.vertices != vertices) {
    report.fail("cell", json{{"anchor", to_std(cell.anchor)}}, "reported vertices do not match the cell");
  }
  unsigned seen = 0;
  for (int k = 0; k <= d; ++k) {
    const int c = query_color(inst, vertices[k]);
    if (k < static_cast<int>(sol.colors.size()) && sol.colors[k] != c) {
      report.fail("color_mismatch", json{{"vertex", to_std(vertices[k])}, {"reported", sol.colors[k]}, {"actual", c}},
                  "reported colour differs from the oracle");
    }
    if (c >= 0 && c <= d) seen |= 1u << c;
  }
  if (seen != (1u << (d + 1)) - 1u) {
    report.fail("not_panchromatic", json{{"anchor", to_std(cell.anchor)}, {"perm", cell.perm.to_vector()}},
                "cell does not carry every colour");
  }
  return report;
}

Report verify_solution(const SpernerInstance& inst, const TriangleSolution& sol) {
  Report report;
  if (inst.kind != SpernerKind::Triangle) throw DomainError("verify_solution: triangle solution for a cube instance");
  const auto& verts = sol.cell.vertices;
  unsigned seen = 0;
  for (const auto& v : verts) {
    if (v.size() != 3 || v.minCoeff() < 0 || v.sum() != inst.N) {
      report.fail("cell", json(to_std(v)), "vertex is not on the triangle lattice");
      return report;
    }
  }
  // a unit triangle: three lattice points pairwise one step e_i - e_j apart
  bool unit = verts.size() == 3;
  for (std::size_t a = 0; unit && a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) unit = unit && (verts[a] - verts[b]).cwiseAbs().sum() == 2;
  if (!unit) {
    json all = json::array();
    for (const auto& v : verts) all.push_back(to_std(v));
    report.fail("cell", all, "vertices do not form a cell of the triangulation");
    return report;
  }
  for (const auto& v : verts) seen |= 1u << query_color(inst, v);
  if (seen != 7u) {
    json verts = json::array();
    for (const auto& v : sol.cell.vertices) verts.push_back(to_std(v));
    report.fail("not_trichromatic", verts, "cell does not carry all three colours");
  }
  return report;
}

std::vector<Point> sample_face(int n, std::uint32_t face, int samples, std::uint64_t seed, Sampling sampling) {
  std::vector<int> corners;
  for (int i = 0; i < n; ++i) {
    if (face & (1u << i)) corners.push_back(i);
  }
  const int m = static_cast<int>(corners.size());
  std::vector<Point> out;
  if (m == 0) return out;
  if (m == 1) {
    Point x = Point::Zero(n);
    x[corners[0]] = 1.0;
    out.push_back(x);
    return out;
  }
  auto rng = seeded(seed, face);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, kMaxDim> shift{};
  for (int k = 0; k + 1 < m; ++k) shift[k] = unit(rng);
  std::array<double, kMaxDim + 1> cuts{};
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k + 1 < m; ++k) {
      double u = sampling == Sampling::Uniform ? unit(rng)
                                               : radical_inverse(static_cast<std::uint64_t>(s) + 1, kPrimes[k]) + shift[k];
      cuts[k] = u - std::floor(u);
    }
    std::sort(cuts.begin(), cuts.begin() + (m - 1));
    Point x = Point::Zero(n);
    double prev = 0.0;
    for (int k = 0; k < m; ++k) {
      const double next = k + 1 < m ? cuts[k] : 1.0;
      x[corners[k]] = next - prev;
      prev = next;
    }
    out.push_back(x);
  }
  return out;
}

Report check_kkm_covering(const SetOracle& covering, int n, int samples_per_face, std::uint64_t seed,
                          Sampling sampling) {
  if (n > 12) throw TooManySubsets("check_kkm_covering: n = " + std::to_string(n) + " exceeds 12");
  require_dimension(n, "check_kkm_covering");
  Report report;
  for (std::uint32_t face = 1; face < (1u << n); ++face) {
    for (const Point& x : sample_face(n, face, samples_per_face, seed, sampling)) {
      bool covered = false;
      for (int i = 0; i < n && !covered; ++i) {
        if (face & (1u << i)) covered = covering(x, i);
      }
      if (!covered) {
        report.fail("kkm_covering", json{{"face", face}, {"x", to_std(x)}},
                    "no set indexed by the face contains the point");
      }
    }
  }
  return report;
}

Report check_kkm_covering(const KkmInstance& inst, int samples_per_face, std::uint64_t seed, Sampling sampling) {
  return check_kkm_covering(
      [&](const Point& x, int set) { return query_kkm_covering(inst, Point(inst.scale * x), set); }, inst.n,
      samples_per_face, seed, sampling);
}

Report check_kkm_covering(const RkkmInstance& inst, int samples_per_face, std::uint64_t seed, Sampling sampling) {
  Report report;
  for (int c = 0; c < inst.n; ++c) {
    Report one = check_kkm_covering([&](const Point& x, int set) { return query_covering(inst, c, x, set); },
                                    inst.n, samples_per_face, seed, sampling);
    for (auto& v : one.violations) v.witness["covering"] = c;
    report.merge(one);
  }
  return report;
}

Report check_sparseness(const SetOracle& covering, int n, int samples, std::uint64_t seed, Sampling sampling) {
  require_dimension(n, "check_sparseness");
  Report report;
  const std::uint32_t all = n >= 32 ? ~0u : (1u << n) - 1u;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t face = all & ~(1u << i);
    for (const Point& x : sample_face(n, face, samples, seed, sampling)) {
      if (covering(x, i)) {
        report.fail("sparseness", json{{"set", i}, {"x", to_std(x)}}, "set meets the opposite face");
      }
    }
  }
  return report;
}

Report check_sparseness(const RkkmInstance& inst, int samples, std::uint64_t seed, Sampling sampling) {
  Report report;
  for (int c = 0; c < inst.n; ++c) {
    Report one = check_sparseness([&](const Point& x, int set) { return query_covering(inst, c, x, set); }, inst.n,
                                  samples, seed, sampling);
    for (auto& v : one.violations) v.witness["covering"] = c;
    report.merge(one);
  }
  return report;
}

Report check_gale_assumptions(const HousingInstance& inst, int samples, std::uint64_t seed) {
  const int n = inst.n;
  Report report;
  report.notes.push_back("assumption (i), closedness of the preference sets, is not sample-testable");
  auto rng = seeded(seed, 0x6a1e);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int s = 0; s < samples; ++s) {
    // (ii): a house priced at 1 or more is never demanded.
    for (int j = 0; j < n; ++j) {
      Point p(n);
      for (int k = 0; k < n; ++k) p[k] = unit(rng);
      if (n > 1) p[(j + 1 + pick(rng) % (n - 1)) % n] = 0.0;
      p[j] = s == 0 ? 1.0 : 1.0 + 0.5 * unit(rng);
      for (int i = 0; i < n; ++i) {
        if (query_preference(inst, i, p, j)) {
          report.fail("assumption_ii", json{{"agent", i}, {"house", j}, {"prices", to_std(p)}},
                      "house demanded at price at least 1");
        }
      }
    }
    // (iii): on the price domain every agent demands some house.
    Point p(n);
    for (int k = 0; k < n; ++k) p[k] = unit(rng);
    p[s % n] = 0.0;
    for (int i = 0; i < n; ++i) {
      bool any = false;
      for (int j = 0; j < n && !any; ++j) any = query_preference(inst, i, p, j);
      if (!any) {
        report.fail("assumption_iii", json{{"agent", i}, {"prices", to_std(p)}}, "agent demands no house");
      }
    }
  }
  return report;
}

Report check_sperner_coloring(const SpernerInstance& inst) {
  Report report;
  const int N = inst.N;
  if (inst.kind == SpernerKind::Triangle) {
    for (int a = 0; a <= N; ++a) {
      for (int b = 0; a + b <= N; ++b) {
        const Lattice v = make_lattice({a, b, N - a - b});
        if (v.minCoeff() > 0) continue;
        const int c = query_color(inst, v);
        if (c < 0 || c > 2 || v[c] == 0) {
          report.fail("boundary", json{{"vertex", to_std(v)}, {"color", c}}, "colour i used where v_i = 0");
        }
      }
    }
    return report;
  }
  const int d = inst.d;
  auto check = [&](const Lattice& v) {
    const bool zero = v.minCoeff() == 0;
    const bool full = v.maxCoeff() == N;
    if (!zero && !full) return;
    const int c = query_color(inst, v);
    if (c >= 1 && c <= d && v[c - 1] == 0) {
      report.fail("boundary_zero", json{{"vertex", to_std(v)}, {"color", c}},
                  "colour k+1 used where coordinate k is 0");
    }
    if (c == 0 && full) {
      report.fail("boundary_full", json{{"vertex", to_std(v)}, {"color", c}}, "colour 0 used where a coordinate is N");
    }
  };
  if (N <= 64 && d <= 3) {
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(N + 1);
    for (std::size_t idx = 0; idx < total; ++idx) check(cube_vertex(d, N, idx));
  } else {
    report.notes.push_back("boundary vertices sampled, grid too large for exhaustive check");
    auto rng = seeded(0, 0xb0da);
    std::uniform_int_distribution<int> coord(0, N);
    std::uniform_int_distribution<int> axis(0, d - 1);
    std::uniform_int_distribution<int> side(0, 1);
    for (int s = 0; s < 10000; ++s) {
      Lattice v(d);
      for (int k = 0; k < d; ++k) v[k] = coord(rng);
      v[axis(rng)] = side(rng) ? N : 0;
      check(v);
    }
  }
  return report;
}

Report check_large_simplex_coloring(const SpernerInstance& inst) {
  if (inst.kind != SpernerKind::Cube) throw DomainError("check_large_simplex_coloring: needs a cube instance");
  Report report;
  const int d = inst.d;
  const int N = inst.N;
  auto check = [&](const Lattice& v) {
    const int c = query_color(inst, v);
    const BarycentricCoords a = barycentric(v, N);
    if (c < 0 || c > d || a.scaled[c] == 0) {
      report.fail("large_simplex_support", json{{"vertex", to_std(v)}, {"color", c}},
                  "colour outside the support of the barycentric coordinates");
    }
  };
  double total = std::pow(N + 1.0, d);
  if (total <= 2e6) {
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(total); ++idx) check(cube_vertex(d, N, idx));
  } else {
    report.notes.push_back("vertices sampled, grid too large for exhaustive check");
    auto rng = seeded(0, 0x1a5e);
    std::uniform_int_distribution<int> coord(0, N);
    for (int s = 0; s < 100000; ++s) {
      Lattice v(d);
      for (int k = 0; k < d; ++k) v[k] = coord(rng);
      check(v);
    }
  }
  return report;
}

Report check_cake_assumptions(const CakeInstance& inst, int samples, std::uint64_t seed) {
  Report report;
  auto rng = seeded(seed, 0xca4e);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < inst.d; ++i) {
    for (int s = 0; s < samples; ++s) {
      double a = unit(rng), b = unit(rng);
      if (a > b) std::swap(a, b);
      const double empty = eval_cake_utility(inst, i, a, a);
      if (empty != 0.0) report.fail("empty_piece", json{{"player", i}, {"at", a}}, "empty piece has nonzero value");
      const double u = eval_cake_utility(inst, i, a, b);
      if (b > a && !(u > 0.0)) {
        report.fail("hungriness", json{{"player", i}, {"a", a}, {"b", b}}, "nonempty piece has no value");
      }
      double a2 = std::clamp(a + 0.1 * (unit(rng) - 0.5), 0.0, 1.0);
      double b2 = std::clamp(b + 0.1 * (unit(rng) - 0.5), a2, 1.0);
      const double u2 = eval_cake_utility(inst, i, a2, b2);
      if (std::abs(u - u2) > inst.lipschitz * (std::abs(a - a2) + std::abs(b - b2)) + 1e-12) {
        report.fail("lipschitz", json{{"player", i}, {"a", a}, {"b", b}, {"a2", a2}, {"b2", b2}},
                    "utility changes faster than the declared constant");
      }
    }
  }
  return report;
}

}  // namespace gale
