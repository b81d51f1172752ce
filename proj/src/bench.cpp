#include "gale/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace gale {

namespace {

std::mt19937_64 rep_rng(std::uint64_t seed, int n, int rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(rep)};
  return std::mt19937_64(seq);
}

struct Measured {
  std::uint64_t queries = 0;
  double bound = 0.0;
};

Measured run_argmax(int n, double epsilon, std::mt19937_64& rng, const SolveOptions& options) {
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::vector<Point> weights(n, Point(n));
  for (auto& w : weights) {
    for (int k = 0; k < n; ++k) w[k] = weight(rng);
  }
  const RkkmInstance inst = make_weighted_argmax_rkkm(weights);
  solve_rkkm(inst, epsilon, options);
  return {inst.account.ledger->total("covering"), bench_bound("argmax", n, epsilon)};
}

Measured run_quasilinear(int n, double epsilon, std::mt19937_64& rng, const SolveOptions& options) {
  std::uniform_real_distribution<double> value(0.05, 0.95);
  Eigen::MatrixXd values(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) values(i, j) = value(rng);
  }
  const HousingInstance inst = make_quasilinear_market(values);
  solve_housing(inst, epsilon, options);
  return {inst.account.ledger->total("preference"), bench_bound("quasilinear", n, epsilon)};
}

Measured run_cake(int n, double epsilon, std::mt19937_64& rng, const SolveOptions& options) {
  std::uniform_real_distribution<double> density(0.5, 2.0);
  std::uniform_real_distribution<double> split(0.2, 0.8);
  std::vector<std::vector<DensitySegment>> players;
  for (int i = 0; i < n; ++i) {
    const double s = split(rng);
    players.push_back({{0.0, s, density(rng)}, {s, 1.0, density(rng)}});
  }
  const CakeInstance inst = make_piecewise_cake(players);
  solve_cake(inst, epsilon, options);
  return {inst.account.ledger->total("utility"), bench_bound("cake", n, epsilon, inst.lipschitz)};
}

}  // namespace

double bench_bound(const std::string& family, int n, double epsilon, double lipschitz) {
  if (family == "argmax") return rkkm_query_bound(n, epsilon);
  if (family == "quasilinear") return rkkm_query_bound(n, epsilon / (static_cast<double>(n) * n));
  if (family == "cake") return n * rkkm_query_bound(n, epsilon / (4.0 * lipschitz));
  throw InputError("bench: unknown family \"" + family + "\"");
}

std::vector<BenchRow> run_bench(const std::string& family, const std::vector<int>& sizes,
                                const std::vector<double>& epsilons, int repetitions, std::uint64_t seed,
                                const SolveOptions& options) {
  bench_bound(family, 2, 0.5);
  if (repetitions < 1) throw InputError("bench: repetitions must be at least 1");
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    require_dimension(n, "bench");
    for (double epsilon : epsilons) {
      if (!(epsilon > 0.0)) throw InputError("bench: epsilon must be positive");
      BenchRow row;
      row.n = n;
      row.epsilon = epsilon;
      double sum = 0.0;
      for (int rep = 0; rep < repetitions; ++rep) {
        auto rng = rep_rng(seed, n, rep);
        Measured m;
        if (family == "argmax") m = run_argmax(n, epsilon, rng, options);
        if (family == "quasilinear") m = run_quasilinear(n, epsilon, rng, options);
        if (family == "cake") m = run_cake(n, epsilon, rng, options);
        if (static_cast<double>(m.queries) > m.bound) {
          throw InvariantBroken("bench: " + family + " n=" + std::to_string(n) + " used " +
                                std::to_string(m.queries) + " queries, bound " + std::to_string(m.bound));
        }
        sum += static_cast<double>(m.queries);
        row.max_queries = std::max(row.max_queries, m.queries);
        row.bound = std::max(row.bound, m.bound);
      }
      row.mean_queries = sum / repetitions;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n,epsilon,mean_queries,max_queries,bound\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.n << ',' << r.epsilon << ',' << r.mean_queries << ',' << r.max_queries << ',' << r.bound << '\n';
  }
  return out.str();
}

}  // namespace gale
