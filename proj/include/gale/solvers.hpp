#pragma once

#include "gale/oracles.hpp"
#include "gale/reductions.hpp"
#include "gale/types.hpp"

namespace gale {

struct SolveOptions {
  int workers = 1;
  // Put a covering-answer cache in front of the instance handed to the solver.
  bool memoize = false;
  // Re-query binary-search endpoints every iteration and throw if they drift.
  bool debug_invariants = false;
};

Solution solve_rkkm_2(const RkkmInstance& inst, double epsilon, const SolveOptions& options = {});
SpernerSolution solve_sperner_bruteforce(const SpernerInstance& inst, const SolveOptions& options = {});
Solution solve_rkkm(const RkkmInstance& inst, double epsilon, const SolveOptions& options = {});
Solution solve_housing(const HousingInstance& inst, double epsilon, const SolveOptions& options = {});
Solution solve_cake(const CakeInstance& inst, double epsilon, const SolveOptions& options = {});
// Approximate KKM point of a single covering: witnesses lie in the sets perm[i].
Solution solve_kkm(const KkmInstance& inst, double epsilon, const SolveOptions& options = {});
TriangleSolution solve_sperner_triangle(const SpernerInstance& inst, const SolveOptions& options = {});

// Query budget of solve_rkkm for n coverings at epsilon.
double rkkm_query_bound(int n, double epsilon);
// Query budget of the two-covering binary search.
double binary_search_query_bound(double epsilon);

}  // namespace gale
