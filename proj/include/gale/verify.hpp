#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gale/oracles.hpp"
#include "gale/reductions.hpp"
#include "gale/types.hpp"

namespace gale {

struct Violation {
  std::string check;
  nlohmann::json witness;
  std::string detail;
};

struct Report {
  bool passed = true;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  void fail(std::string check, nlohmann::json witness, std::string detail);
  void merge(const Report& other);
  bool has(const std::string& check) const;
  nlohmann::json to_json() const;
};

// Slack on witness distances to absorb rounding.
inline constexpr double kDistanceSlack = 1e-12;

enum class Sampling { LowDiscrepancy, Uniform };

// Exact checks through the oracles. Throw MissingWitnesses when the solution
// does not carry one witness per agent.
Report verify_solution(const HousingInstance& inst, const Solution& sol, double epsilon);
Report verify_solution(const RkkmInstance& inst, const Solution& sol, double epsilon);
Report verify_solution(const KkmInstance& inst, const Solution& sol, double epsilon);
// Direct envy check with d^2 utility evaluations; witnesses are not needed.
Report verify_solution(const CakeInstance& inst, const Solution& sol, double epsilon);
Report verify_solution(const SpernerInstance& inst, const SpernerSolution& sol);
Report verify_solution(const SpernerInstance& inst, const TriangleSolution& sol);

// Covering oracle of the unit simplex: is x in set j?
using SetOracle = std::function<bool(const Point& x, int set)>;

Report check_kkm_covering(const SetOracle& covering, int n, int samples_per_face, std::uint64_t seed,
                          Sampling sampling = Sampling::LowDiscrepancy);
Report check_kkm_covering(const KkmInstance& inst, int samples_per_face, std::uint64_t seed,
                          Sampling sampling = Sampling::LowDiscrepancy);
// Every covering of the instance.
Report check_kkm_covering(const RkkmInstance& inst, int samples_per_face, std::uint64_t seed,
                          Sampling sampling = Sampling::LowDiscrepancy);

Report check_sparseness(const SetOracle& covering, int n, int samples, std::uint64_t seed,
                        Sampling sampling = Sampling::LowDiscrepancy);
Report check_sparseness(const RkkmInstance& inst, int samples, std::uint64_t seed,
                        Sampling sampling = Sampling::LowDiscrepancy);

Report check_gale_assumptions(const HousingInstance& inst, int samples, std::uint64_t seed);

// Boundary conditions of the colouring. Cube: colour k+1 is not used where
// v_k = 0 ("boundary_zero") and colour 0 is not used where some v_k = N
// ("boundary_full"). Triangle: colour i is not used where v_i = 0.
Report check_sperner_coloring(const SpernerInstance& inst);

// Colour of v lies in the support of its barycentric coordinates. This is
// the property that makes every large simplex carry a panchromatic cell.
Report check_large_simplex_coloring(const SpernerInstance& inst);

// Deterministic sample points on the face spanned by the corners in the bitmask.
std::vector<Point> sample_face(int n, std::uint32_t face, int samples, std::uint64_t seed,
                               Sampling sampling = Sampling::LowDiscrepancy);

Report check_cake_assumptions(const CakeInstance& inst, int samples, std::uint64_t seed);

}  // namespace gale
