#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gale/oracles.hpp"
#include "gale/reductions.hpp"
#include "gale/types.hpp"

namespace gale {

using AnyInstance = std::variant<HousingInstance, RkkmInstance, KkmInstance, CakeInstance, SpernerInstance>;

// Problem name of an instance: housing, rkkm, kkm, cake, sperner-triangle or sperner-cube.
std::string problem_kind(const AnyInstance& inst);
const nlohmann::json& descriptor_of(const AnyInstance& inst);
QueryLedger& ledger_of(const AnyInstance& inst);

// Builds an instance from its JSON document. Composed documents replay their
// reduction chain. Errors are InputError naming the offending field.
AnyInstance instance_from_json(const nlohmann::json& doc);
AnyInstance load_instance(const std::string& path);

struct ReductionStep {
  std::string name;
  double source_epsilon = 0.0;
  double target_epsilon = 0.0;
  AnyInstance target;
};

// Applies one named reduction; NoSuchReduction when it does not accept the instance.
ReductionStep apply_reduction(const AnyInstance& inst, const std::string& name, double epsilon);

// Reduction names leading from one problem kind to another (shortest chain).
// Equal kinds give the self-reduction of that kind (lift_market, sparsify).
std::vector<std::string> reduction_path(const std::string& from, const std::string& to);

// View of an instance as Rainbow-KKM; a single unit-scale KKM covering
// becomes identical copies.
RkkmInstance as_rkkm(const AnyInstance& inst);

nlohmann::json solution_to_json(const Solution& sol);
Solution solution_from_json(const nlohmann::json& doc);
nlohmann::json solution_to_json(const SpernerSolution& sol);
SpernerSolution sperner_solution_from_json(const nlohmann::json& doc);
nlohmann::json solution_to_json(const TriangleSolution& sol);
TriangleSolution triangle_solution_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gale
