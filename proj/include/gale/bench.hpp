#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gale/solvers.hpp"

namespace gale {

struct BenchRow {
  int n = 0;
  double epsilon = 0.0;
  double mean_queries = 0.0;
  std::uint64_t max_queries = 0;
  double bound = 0.0;
};

// Families: "argmax" (random weighted-argmax coverings), "quasilinear"
// (random housing markets) and "cake" (random piecewise densities).
// Repetition r of a cell uses a generator seeded from (seed, n, r).
// Throws InvariantBroken when a measured count exceeds its bound.
std::vector<BenchRow> run_bench(const std::string& family, const std::vector<int>& sizes,
                                const std::vector<double>& epsilons, int repetitions, std::uint64_t seed,
                                const SolveOptions& options = {});

std::string bench_csv(const std::vector<BenchRow>& rows);

// Queries-per-solve bound for a family at (n, epsilon).
double bench_bound(const std::string& family, int n, double epsilon, double lipschitz = 1.0);

}  // namespace gale
