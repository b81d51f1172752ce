#include "gale/reductions.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "gale/geometry.hpp"

namespace gale {

using nlohmann::json;

namespace {

void check_epsilon(double epsilon, const char* what) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw DomainError(std::string(what) + ": epsilon must be positive");
  }
}

double max_distance(const Point& point, const std::vector<Point>& witnesses) {
  double worst = 0.0;
  for (const auto& w : witnesses) {
    if (w.size() == point.size()) worst = std::max(worst, l1_distance(point, w));
  }
  return worst;
}

}  // namespace

json compose_descriptor(const json& source, const std::string& reduction, double source_epsilon,
                        double target_epsilon) {
  json step{{"reduction", reduction}, {"epsilon", source_epsilon}, {"target_epsilon", target_epsilon}};
  if (source.is_object() && source.value("kind", "") == "composed") {
    json out = source;
    out["chain"].push_back(step);
    return out;
  }
  return json{{"kind", "composed"}, {"source", source}, {"chain", json::array({step})}};
}

Interval cut_piece(const Point& x, int k) {
  if (k < 0 || k >= x.size()) {
    throw IndexOutOfRange("cut_piece: piece " + std::to_string(k) + " of a " + std::to_string(x.size()) + "-cut");
  }
  if (!in_simplex(x)) throw DomainError("cut_piece: cut is not a point of the simplex");
  const Point y = project_simplex(x);
  const double a = std::min(1.0, y.head(k).sum());
  return {a, std::min(1.0, a + y[k])};
}

Point project_sparse(const Point& x, double delta) {
  if (!in_simplex(x)) throw DomainError("project_sparse: point outside the simplex");
  if (!(delta > 0.0) || delta >= 0.25) throw DomainError("project_sparse: delta must lie in (0, 1/4)");
  Point y = (x.array() > delta).select(x, 0.0);
  const double s = y.sum();
  if (s <= 0.0) throw DegenerateInput("project_sparse: every entry is at most delta");
  return y / s;
}

Reduction<HousingInstance> lift_market(const HousingInstance& inst, double epsilon) {
  check_epsilon(epsilon, "lift_market");
  const int n = inst.n;
  if (n + 1 > kMaxDim) throw DomainError("lift_market: lifted market exceeds the dimension limit");
  auto oracle = [inst, n](int agent, const Point& q, int house) {
    if (house == kNothing) return true;
    const double last = q[n];
    if (agent == n) {
      if (house == n) return last <= 0.75 + kOracleTol;
      return std::abs(q[house]) <= kTol && last >= 0.75 - kOracleTol;
    }
    if (house == n) return std::abs(last) <= kTol;
    const Point head = q.head(n);
    return query_preference(inst, agent, head, house);
  };
  auto& ledger = inst.account.ledger;
  Reduction<HousingInstance> r;
  r.name = "lift_market";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon;
  r.target = make_housing_instance(n + 1, oracle, compose_descriptor(inst.descriptor, r.name, epsilon, epsilon),
                                   ledger, ledger->fresh_stage(r.name));
  r.backmap = [n](const Solution& lifted) {
    if (static_cast<int>(lifted.perm.size()) != n + 1 || lifted.perm[n] != n) {
      throw InvariantBroken("lift_market: the added agent is not assigned the added house");
    }
    Solution out;
    out.point = lifted.point.head(n);
    out.perm.assign(lifted.perm.begin(), lifted.perm.begin() + n);
    for (const auto& w : lifted.witnesses) {
      if (static_cast<int>(out.witnesses.size()) < n) out.witnesses.push_back(w.head(n));
    }
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = lifted.ledger;
    return out;
  };
  return r;
}

Reduction<RkkmInstance> sparsify(const RkkmInstance& inst, double epsilon) {
  check_epsilon(epsilon, "sparsify");
  const int n = inst.n;
  const double delta = epsilon / (8.0 * n);
  auto oracle = [inst, delta](int covering, const Point& x, int set) {
    if (x[set] < delta) return false;
    return query_covering(inst, covering, project_sparse(x, delta), set);
  };
  auto& ledger = inst.account.ledger;
  Reduction<RkkmInstance> r;
  r.name = "sparsify";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon / 2.0;
  r.target = make_rkkm_instance(n, oracle, true,
                                compose_descriptor(inst.descriptor, r.name, epsilon, r.target_epsilon),
                                ledger, ledger->fresh_stage(r.name));
  r.backmap = [delta](const Solution& sol) {
    Solution out;
    out.point = project_sparse(sol.point, delta);
    out.perm = sol.perm;
    for (const auto& w : sol.witnesses) out.witnesses.push_back(project_sparse(w, delta));
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = sol.ledger;
    return out;
  };
  return r;
}

Reduction<RkkmInstance> housing_to_rkkm(const HousingInstance& inst, double epsilon) {
  check_epsilon(epsilon, "housing_to_rkkm");
  const int n = inst.n;
  auto oracle = [inst](int agent, const Point& x, int house) {
    return query_preference(inst, agent, phi_inverse(x), house);
  };
  auto& ledger = inst.account.ledger;
  Reduction<RkkmInstance> r;
  r.name = "housing_to_rkkm";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon / (static_cast<double>(n) * n);
  // Sets avoid the face x_j = 0 because phi_inverse puts price 1 there.
  r.target = make_rkkm_instance(n, oracle, true,
                                compose_descriptor(inst.descriptor, r.name, epsilon, r.target_epsilon),
                                ledger, ledger->fresh_stage(r.name));
  r.backmap = [](const Solution& sol) {
    Solution out;
    out.point = phi_inverse(sol.point);
    out.perm = sol.perm;
    for (const auto& w : sol.witnesses) out.witnesses.push_back(phi_inverse(w));
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = sol.ledger;
    return out;
  };
  return r;
}

Reduction<HousingInstance> rkkm_to_housing(const RkkmInstance& inst, double epsilon) {
  check_epsilon(epsilon, "rkkm_to_housing");
  if (!inst.sparse) throw NotSparse("rkkm_to_housing: source coverings are not flagged sparse; sparsify first");
  const int n = inst.n;
  auto oracle = [inst](int agent, const Point& p, int house) {
    if (house == kNothing) return true;
    if (!in_price_domain(p)) return false;
    return query_covering(inst, agent, phi(p), house);
  };
  auto& ledger = inst.account.ledger;
  Reduction<HousingInstance> r;
  r.name = "rkkm_to_housing";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon / n;
  r.target = make_housing_instance(n, oracle,
                                   compose_descriptor(inst.descriptor, r.name, epsilon, r.target_epsilon),
                                   ledger, ledger->fresh_stage(r.name));
  r.backmap = [](const Solution& sol) {
    Solution out;
    out.point = phi(in_price_domain(sol.point) ? Point(sol.point) : project_price_domain(sol.point));
    out.perm = sol.perm;
    for (const auto& w : sol.witnesses) out.witnesses.push_back(phi(w));
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = sol.ledger;
    return out;
  };
  return r;
}

Reduction<RkkmInstance> cake_to_rkkm(const CakeInstance& inst, double epsilon) {
  check_epsilon(epsilon, "cake_to_rkkm");
  const int d = inst.d;
  // Piece `set` is weakly best for the player among all d pieces of the cut.
  auto oracle = [inst, d](int player, const Point& x, int set) {
    std::array<double, kMaxDim> value{};
    double best = -1.0;
    double start = 0.0;
    for (int k = 0; k < d; ++k) {
      const double end = k + 1 == d ? 1.0 : std::min(1.0, start + std::max(0.0, x[k]));
      value[k] = eval_cake_utility(inst, player, start, end);
      best = std::max(best, value[k]);
      start = end;
    }
    return value[set] >= best - kOracleTol;
  };
  auto& ledger = inst.account.ledger;
  Reduction<RkkmInstance> r;
  r.name = "cake_to_rkkm";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon / (4.0 * inst.lipschitz);
  // Hungriness keeps an empty piece from being weakly best, so the covering is sparse.
  r.target = make_rkkm_instance(d, oracle, true,
                                compose_descriptor(inst.descriptor, r.name, epsilon, r.target_epsilon),
                                ledger, ledger->fresh_stage(r.name));
  r.backmap = [](const Solution& sol) { return sol; };
  return r;
}

Reduction<KkmInstance, Solution, TriangleSolution> sperner2d_to_kkm(const SpernerInstance& inst) {
  if (inst.kind != SpernerKind::Triangle) throw DomainError("sperner2d_to_kkm: needs a triangle instance");
  const int N = inst.N;
  // x is in set i when one of its nearest lattice vertices has colour i.
  auto oracle = [inst, N](const Point& x, int set) {
    for (const Lattice& v : nearest_triangle_vertices(x, N)) {
      if (query_color(inst, v) == set) return true;
    }
    return false;
  };
  auto& ledger = inst.account.ledger;
  Reduction<KkmInstance, Solution, TriangleSolution> r;
  r.name = "sperner2d_to_kkm";
  r.source_epsilon = 0.0;
  r.target_epsilon = kTriangleKkmEpsilon;
  r.target = make_kkm_instance(3, N, oracle, true,
                               compose_descriptor(inst.descriptor, r.name, 0.0, r.target_epsilon),
                               ledger, ledger->fresh_stage(r.name));
  r.backmap = [inst, N](const Solution& sol) {
    TriangleSolution out;
    out.point = sol.point;
    out.cell = containing_triangle_cell(sol.point, N);
    std::array<bool, 3> seen{};
    for (int k = 0; k < 3; ++k) {
      out.colors[k] = query_color(inst, out.cell.vertices[k]);
      seen[out.colors[k]] = true;
    }
    out.trichromatic = seen[0] && seen[1] && seen[2];
    out.ledger = inst.account.ledger->snapshot();
    return out;
  };
  return r;
}

Reduction<RkkmInstance> kkm_to_rkkm(const KkmInstance& inst, double epsilon) {
  check_epsilon(epsilon, "kkm_to_rkkm");
  const double scale = inst.scale;
  auto oracle = [inst, scale](int, const Point& x, int set) {
    return query_kkm_covering(inst, Point(scale * x), set);
  };
  auto& ledger = inst.account.ledger;
  Reduction<RkkmInstance> r;
  r.name = "kkm_to_rkkm";
  r.source_epsilon = epsilon;
  r.target_epsilon = epsilon / scale;
  r.target = make_rkkm_instance(inst.n, oracle, inst.sparse,
                                compose_descriptor(inst.descriptor, r.name, epsilon, r.target_epsilon),
                                ledger, ledger->fresh_stage(r.name));
  r.backmap = [scale](const Solution& sol) {
    Solution out;
    out.point = scale * sol.point;
    out.perm = sol.perm;
    for (const auto& w : sol.witnesses) out.witnesses.push_back(scale * w);
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = sol.ledger;
    return out;
  };
  return r;
}

int sperner_grid_size(int n, double epsilon) {
  check_epsilon(epsilon, "sperner_grid_size");
  const double N = std::ceil(static_cast<double>(n) / epsilon);
  if (N > static_cast<double>(INT_MAX / 4)) throw DomainError("sperner_grid_size: epsilon too small");
  return static_cast<int>(N);
}

Reduction<SpernerInstance, SpernerSolution, Solution> rkkm_to_sperner(const RkkmInstance& inst,
                                                                      double epsilon) {
  check_epsilon(epsilon, "rkkm_to_sperner");
  if (!inst.sparse) throw NotSparse("rkkm_to_sperner: source coverings are not flagged sparse; sparsify first");
  const int n = inst.n;
  if (n < 2) throw DomainError("rkkm_to_sperner: needs at least two coverings");
  const int d = n - 1;
  const int N = sperner_grid_size(n, epsilon);
  // Colour = first set of covering L(v) that contains alpha(v).
  auto oracle = [inst, n, d, N](const Lattice& v) {
    const BarycentricCoords a = barycentric(v, N);
    long long weighted = 0;
    for (int i = 0; i <= d; ++i) weighted += static_cast<long long>(i) * a.scaled[i];
    const int covering = static_cast<int>(weighted % (d + 1));
    const Point alpha = a.values();
    for (int j = 0; j < n; ++j) {
      if (query_covering(inst, covering, alpha, j)) return j;
    }
    throw InvariantBroken("rkkm_to_sperner: covering " + std::to_string(covering) +
                          " leaves a simplex point uncovered");
  };
  auto& ledger = inst.account.ledger;
  Reduction<SpernerInstance, SpernerSolution, Solution> r;
  r.name = "rkkm_to_sperner";
  r.source_epsilon = epsilon;
  r.target_epsilon = 0.0;
  json desc = compose_descriptor(inst.descriptor, r.name, epsilon, 0.0);
  r.target = make_sperner_instance(SpernerKind::Cube, d, N, oracle, desc, ledger, ledger->fresh_stage(r.name));
  r.backmap = [n, N](const SpernerSolution& sol) {
    if (static_cast<int>(sol.vertices.size()) != n || static_cast<int>(sol.colors.size()) != n) {
      throw DimensionMismatch("rkkm_to_sperner backmap: cell must have n vertices and colours");
    }
    std::vector<int> by_label(n, -1);
    for (int k = 0; k < n; ++k) {
      const int l = label(sol.vertices[k], N);
      if (by_label[l] != -1) throw InvariantBroken("rkkm_to_sperner backmap: repeated label in a cell");
      by_label[l] = k;
    }
    Solution out;
    out.point = barycentric(sol.vertices[by_label[0]], N).values();
    for (int i = 0; i < n; ++i) {
      out.perm.push_back(sol.colors[by_label[i]]);
      out.witnesses.push_back(barycentric(sol.vertices[by_label[i]], N).values());
    }
    out.epsilon_achieved = max_distance(out.point, out.witnesses);
    out.ledger = sol.ledger;
    return out;
  };
  return r;
}

}  // namespace gale
