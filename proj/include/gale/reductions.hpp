#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gale/oracles.hpp"
#include "gale/triangulation.hpp"
#include "gale/types.hpp"

namespace gale {

// Panchromatic cell of a cube Sperner instance, vertices v0..vd in staircase order.
struct SpernerSolution {
  Cell cell;
  std::vector<Lattice> vertices;
  std::vector<int> colors;
  LedgerSnapshot ledger;
};

// A cell of the triangle lattice recovered from an approximate KKM point.
struct TriangleSolution {
  TriangleCell cell;
  std::array<int, 3> colors{};
  bool trichromatic = false;
  Point point;  // the KKM point, on the scaled triangle
  LedgerSnapshot ledger;
};

// A target instance together with the map taking target solutions back to
// source solutions. Epsilons are recorded so chains can be audited.
template <typename Target, typename TargetSolution = Solution, typename SourceSolution = Solution>
struct Reduction {
  std::string name;
  Target target;
  double source_epsilon = 0.0;
  double target_epsilon = 0.0;
  std::function<SourceSolution(const TargetSolution&)> backmap;
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

// Piece k of a cut x: [x_0 + ... + x_(k-1), that + x_k].
Interval cut_piece(const Point& x, int k);

// Zero entries <= delta and renormalise.
Point project_sparse(const Point& x, double delta);

Reduction<HousingInstance> lift_market(const HousingInstance& inst, double epsilon);
Reduction<RkkmInstance> sparsify(const RkkmInstance& inst, double epsilon);
Reduction<RkkmInstance> housing_to_rkkm(const HousingInstance& inst, double epsilon);
Reduction<HousingInstance> rkkm_to_housing(const RkkmInstance& inst, double epsilon);
Reduction<RkkmInstance> cake_to_rkkm(const CakeInstance& inst, double epsilon);
Reduction<KkmInstance, Solution, TriangleSolution> sperner2d_to_kkm(const SpernerInstance& inst);
Reduction<RkkmInstance> kkm_to_rkkm(const KkmInstance& inst, double epsilon);
Reduction<SpernerInstance, SpernerSolution, Solution> rkkm_to_sperner(const RkkmInstance& inst,
                                                                      double epsilon);

// Grid size used by rkkm_to_sperner.
int sperner_grid_size(int n, double epsilon);

// Approximation handed to the KKM covering built from a triangle Sperner instance.
inline constexpr double kTriangleKkmEpsilon = 1.0 / 8.0;

// Descriptor of source followed by one more reduction step.
nlohmann::json compose_descriptor(const nlohmann::json& source, const std::string& reduction,
                                  double source_epsilon, double target_epsilon);

}  // namespace gale
