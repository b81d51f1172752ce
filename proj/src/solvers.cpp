#include "gale/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "gale/geometry.hpp"

namespace gale {

namespace {

Solution single_agent_solution(const Point& point) {
  Solution sol;
  sol.point = point;
  sol.perm = {0};
  sol.witnesses = {point};
  return sol;
}

}  // namespace

double binary_search_query_bound(double epsilon) {
  return 4.0 * std::ceil(std::log2(2.0 / epsilon)) + 4.0;
}

double rkkm_query_bound(int n, double epsilon) {
  if (n <= 1) return 0.0;
  if (n == 2) return binary_search_query_bound(epsilon);
  const int N = sperner_grid_size(n, epsilon / 2.0);
  return n * std::pow(static_cast<double>(N) + 1.0, n - 1);
}

Solution solve_rkkm_2(const RkkmInstance& inst, double epsilon, const SolveOptions& options) {
  if (inst.n != 2) throw DomainError("solve_rkkm_2: needs exactly two coverings");
  if (!(epsilon > 0.0)) throw DomainError("solve_rkkm_2: epsilon must be positive");
  Point x = make_point({1.0, 0.0});
  Point y = make_point({0.0, 1.0});
  if (!query_covering(inst, 0, x, 0) || !query_covering(inst, 1, y, 1)) {
    throw InvariantBroken("solve_rkkm_2: a simplex corner misses its own set; not a KKM covering");
  }
  // Interval length halves every round; 64 rounds exhaust double precision.
  for (int round = 0; round < 64 && l1_distance(x, y) > epsilon; ++round) {
    const Point z = 0.5 * (x + y);
    const bool first = query_covering(inst, 0, z, 0);
    const bool second = query_covering(inst, 1, z, 1);
    if (!first && !second) {
      // Covering forces z into the opposite sets of both coverings.
      Solution sol;
      sol.point = z;
      sol.perm = {1, 0};
      sol.witnesses = {z, z};
      sol.epsilon_achieved = 0.0;
      sol.ledger = inst.account.ledger->snapshot();
      return sol;
    }
    if (first) x = z;
    if (second) y = z;
    if (options.debug_invariants &&
        (!query_covering(inst, 0, x, 0) || !query_covering(inst, 1, y, 1))) {
      throw InvariantBroken("solve_rkkm_2: endpoint left its set");
    }
  }
  Solution sol;
  sol.point = x;
  sol.perm = {0, 1};
  sol.witnesses = {x, y};
  sol.epsilon_achieved = l1_distance(x, y);
  sol.ledger = inst.account.ledger->snapshot();
  return sol;
}

namespace {

// Colours of the vertices whose first coordinate is fixed, queried on demand.
class Slab {
 public:
  Slab(int d, int N) : d_(d), N_(N) {
    std::size_t size = 1;
    for (int k = 1; k < d; ++k) size *= static_cast<std::size_t>(N + 1);
    colors_.assign(size, -1);
  }

  void reset(int first) {
    first_ = first;
    std::fill(colors_.begin(), colors_.end(), static_cast<signed char>(-1));
  }

  int first() const { return first_; }

  std::size_t index(const Lattice& v) const {
    std::size_t idx = 0;
    for (int k = 1; k < d_; ++k) idx = idx * static_cast<std::size_t>(N_ + 1) + static_cast<std::size_t>(v[k]);
    return idx;
  }

  int color(const SpernerInstance& inst, const Lattice& v) {
    signed char& slot = colors_[index(v)];
    if (slot < 0) slot = static_cast<signed char>(checked_color(inst, v));
    return slot;
  }

  // Queries every vertex of the slab, split across workers.
  void fill(const SpernerInstance& inst, int workers) {
    const std::size_t size = colors_.size();
    const std::size_t chunk = (size + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(size, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, w, lo, hi] {
        try {
          Lattice v(d_);
          for (std::size_t idx = lo; idx < hi; ++idx) {
            if (colors_[idx] >= 0) continue;
            v[0] = first_;
            std::size_t rest = idx;
            for (int k = d_ - 1; k >= 1; --k) {
              v[k] = static_cast<int>(rest % static_cast<std::size_t>(N_ + 1));
              rest /= static_cast<std::size_t>(N_ + 1);
            }
            colors_[idx] = static_cast<signed char>(checked_color(inst, v));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

 private:
  int checked_color(const SpernerInstance& inst, const Lattice& v) const {
    const int c = query_color(inst, v);
    if (c < 0 || c > d_) throw DomainError("solve_sperner_bruteforce: colour " + std::to_string(c) + " out of range");
    return c;
  }

  int d_;
  int N_;
  int first_ = 0;
  std::vector<signed char> colors_;
};

}  // namespace

SpernerSolution solve_sperner_bruteforce(const SpernerInstance& inst, const SolveOptions& options) {
  if (inst.kind != SpernerKind::Cube) throw DomainError("solve_sperner_bruteforce: needs a cube instance");
  const int d = inst.d;
  const int N = inst.N;
  if (d + 1 > kMaxDim) throw DomainError("solve_sperner_bruteforce: dimension too large");
  const int workers = std::max(1, options.workers);
  const unsigned full = (1u << (d + 1)) - 1u;

  Slab low(d, N), high(d, N);
  low.reset(0);
  high.reset(1);
  if (workers > 1) low.fill(inst, workers);

  Lattice anchor = Lattice::Zero(d);
  Lattice v(d);
  std::array<int, kMaxDim> colors{};
  for (int a0 = 0; a0 < N; ++a0) {
    if (a0 > 0) {
      std::swap(low, high);
      high.reset(a0 + 1);
    }
    if (workers > 1) high.fill(inst, workers);
    anchor.setZero();
    anchor[0] = a0;
    while (true) {
      Permutation perm = Permutation::identity(d);
      do {
        v = anchor;
        unsigned seen = 0;
        bool distinct = true;
        for (int k = 0; k <= d; ++k) {
          const int c = (v[0] == a0 ? low : high).color(inst, v);
          colors[k] = c;
          if (seen & (1u << c)) {
            distinct = false;
            break;
          }
          seen |= 1u << c;
          if (k < d) v[perm[k]] += 1;
        }
        if (distinct && seen == full) {
          SpernerSolution sol;
          sol.cell = Cell{anchor, perm};
          sol.vertices = cell_vertices(sol.cell);
          sol.colors.assign(colors.begin(), colors.begin() + d + 1);
          sol.ledger = inst.account.ledger->snapshot();
          return sol;
        }
      } while (perm.next());
      // Next anchor in lexicographic order over the remaining coordinates.
      int k = d - 1;
      while (k >= 1 && anchor[k] == N - 1) anchor[k--] = 0;
      if (k < 1) break;
      anchor[k] += 1;
    }
  }
  throw NoPanchromaticCell("solve_sperner_bruteforce: no panchromatic cell; the colouring is not a Sperner colouring");
}

Solution solve_rkkm(const RkkmInstance& inst, double epsilon, const SolveOptions& options) {
  if (!(epsilon > 0.0)) throw DomainError("solve_rkkm: epsilon must be positive");
  if (inst.n == 1) {
    Solution sol = single_agent_solution(make_point({1.0}));
    sol.ledger = inst.account.ledger->snapshot();
    return sol;
  }
  const RkkmInstance source = options.memoize ? memoized(inst) : inst;
  Solution sol;
  if (inst.n == 2) {
    sol = solve_rkkm_2(source, epsilon, options);
  } else {
    const auto sparse = sparsify(source, epsilon);
    const auto grid = rkkm_to_sperner(sparse.target, sparse.target_epsilon);
    const SpernerSolution cell = solve_sperner_bruteforce(grid.target, options);
    sol = sparse.backmap(grid.backmap(cell));
  }
  sol.ledger = inst.account.ledger->snapshot();
  return sol;
}

Solution solve_housing(const HousingInstance& inst, double epsilon, const SolveOptions& options) {
  const auto r = housing_to_rkkm(inst, epsilon);
  Solution sol = r.backmap(solve_rkkm(r.target, r.target_epsilon, options));
  sol.ledger = inst.account.ledger->snapshot();
  return sol;
}

Solution solve_cake(const CakeInstance& inst, double epsilon, const SolveOptions& options) {
  const auto r = cake_to_rkkm(inst, epsilon);
  Solution sol = r.backmap(solve_rkkm(r.target, r.target_epsilon, options));
  sol.ledger = inst.account.ledger->snapshot();
  return sol;
}

Solution solve_kkm(const KkmInstance& inst, double epsilon, const SolveOptions& options) {
  const auto r = kkm_to_rkkm(inst, epsilon);
  Solution sol = r.backmap(solve_rkkm(r.target, r.target_epsilon, options));
  sol.ledger = inst.account.ledger->snapshot();
  return sol;
}

TriangleSolution solve_sperner_triangle(const SpernerInstance& inst, const SolveOptions& options) {
  const auto r = sperner2d_to_kkm(inst);
  return r.backmap(solve_kkm(r.target, r.target_epsilon, options));
}

}  // namespace gale
