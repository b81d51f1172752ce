#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "gale/types.hpp"

namespace gale {

// House index meaning "demand nothing".
inline constexpr int kNothing = -1;

// Slack used by the generator families for their weak inequalities, so that
// points produced by exact-in-theory arithmetic (round trips, 1/N grids)
// stay inside the closed sets they belong to.
inline constexpr double kOracleTol = 1e-12;

class QueryLedger {
 public:
  using Counter = std::atomic<std::uint64_t>;

  // Returns the counter for id, creating it at zero. The reference stays valid
  // for the ledger's lifetime.
  Counter& counter(const std::string& id);

  std::uint64_t count(const std::string& id) const;
  std::uint64_t total() const;
  // Sum of the counters whose id starts with prefix.
  std::uint64_t total(std::string_view prefix) const;
  LedgerSnapshot snapshot() const;

  // base, then base#2, base#3, ... on repeated use within this ledger.
  std::string fresh_stage(const std::string& base);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Counter>> counters_;
  std::map<std::string, int> stages_;
};

using PreferenceOracle = std::function<bool(int agent, const Point& prices, int house)>;
using CoveringOracle = std::function<bool(int covering, const Point& x, int set)>;
using KkmOracle = std::function<bool(const Point& x, int set)>;
using UtilityOracle = std::function<double(int player, double a, double b)>;
using ColorOracle = std::function<int(const Lattice& v)>;

// Counter namespace plus the ledger an instance reports to. Generated
// instances use an empty stage; reduction targets get the reduction's name.
struct OracleAccount {
  std::shared_ptr<QueryLedger> ledger;
  std::string stage;
  std::vector<QueryLedger::Counter*> counters;

  std::string counter_id(std::string_view kind, int index) const;
};

struct HousingInstance {
  int n = 0;
  PreferenceOracle oracle;
  nlohmann::json descriptor;
  OracleAccount account;
};

struct RkkmInstance {
  int n = 0;
  CoveringOracle oracle;
  bool sparse = false;
  nlohmann::json descriptor;
  OracleAccount account;
};

// A single KKM covering of the scaled simplex {x >= 0, sum x = scale}.
struct KkmInstance {
  int n = 0;
  double scale = 1.0;
  KkmOracle oracle;
  bool sparse = false;
  nlohmann::json descriptor;
  OracleAccount account;
};

struct CakeInstance {
  int d = 0;
  double lipschitz = 1.0;
  UtilityOracle oracle;
  nlohmann::json descriptor;
  OracleAccount account;
};

enum class SpernerKind { Triangle, Cube };

// Triangle: vertices (v0,v1,v2) >= 0 with sum N, colours {0,1,2}.
// Cube: vertices in {0..N}^d, colours {0..d}.
struct SpernerInstance {
  SpernerKind kind = SpernerKind::Cube;
  int d = 0;
  int N = 0;
  ColorOracle oracle;
  nlohmann::json descriptor;
  OracleAccount account;

  int coords() const { return kind == SpernerKind::Triangle ? 3 : d; }
  int colors() const { return kind == SpernerKind::Triangle ? 3 : d + 1; }
};

// Instance constructors. A null ledger gets a fresh one; the stage names the
// counter namespace ("" for generated instances).
HousingInstance make_housing_instance(int n, PreferenceOracle oracle, nlohmann::json descriptor,
                                      std::shared_ptr<QueryLedger> ledger = nullptr,
                                      const std::string& stage = "");
RkkmInstance make_rkkm_instance(int n, CoveringOracle oracle, bool sparse, nlohmann::json descriptor,
                                std::shared_ptr<QueryLedger> ledger = nullptr,
                                const std::string& stage = "");
KkmInstance make_kkm_instance(int n, double scale, KkmOracle oracle, bool sparse,
                              nlohmann::json descriptor,
                              std::shared_ptr<QueryLedger> ledger = nullptr,
                              const std::string& stage = "");
CakeInstance make_cake_instance(int d, double lipschitz, UtilityOracle oracle,
                                nlohmann::json descriptor,
                                std::shared_ptr<QueryLedger> ledger = nullptr,
                                const std::string& stage = "");
SpernerInstance make_sperner_instance(SpernerKind kind, int d, int N, ColorOracle oracle,
                                      nlohmann::json descriptor,
                                      std::shared_ptr<QueryLedger> ledger = nullptr,
                                      const std::string& stage = "");

// Counted queries. Each call adds exactly one to the instance's counter (or,
// for the overloads taking a ledger, to the same-named counter there).
bool query_preference(const HousingInstance& inst, int agent, const Point& prices, int house);
bool query_preference(const HousingInstance& inst, QueryLedger& ledger, int agent,
                      const Point& prices, int house);
bool query_covering(const RkkmInstance& inst, int covering, const Point& x, int set);
bool query_covering(const RkkmInstance& inst, QueryLedger& ledger, int covering, const Point& x,
                    int set);
bool query_kkm_covering(const KkmInstance& inst, const Point& x, int set);
double eval_cake_utility(const CakeInstance& inst, int player, double a, double b);
double eval_cake_utility(const CakeInstance& inst, QueryLedger& ledger, int player, double a,
                         double b);
int query_color(const SpernerInstance& inst, const Lattice& v);

// Generator families.
HousingInstance make_quasilinear_market(const Eigen::MatrixXd& values);
KkmInstance make_weighted_argmax_covering(const Point& weights);
// One weighted-argmax covering per agent.
RkkmInstance make_weighted_argmax_rkkm(const std::vector<Point>& weights);

struct DensitySegment {
  double from = 0.0;
  double to = 0.0;
  double density = 0.0;
};
CakeInstance make_piecewise_cake(const std::vector<std::vector<DensitySegment>>& players);

// colors row-major over (v0, v1) with v2 = N - v0 - v1.
SpernerInstance make_sperner_triangle(int N, std::vector<int> colors);
SpernerInstance make_sperner_triangle(int N, ColorOracle oracle);
// colors row-major over {0..N}^d, last coordinate fastest.
SpernerInstance make_sperner_cube(int d, int N, std::vector<int> colors);
SpernerInstance make_sperner_cube(int d, int N, ColorOracle oracle);

// Flat indices used by the stored-colour formats.
std::size_t triangle_index(int N, const Lattice& v);
std::size_t cube_index(int N, const Lattice& v);
Lattice cube_vertex(int d, int N, std::size_t index);

// Wraps an instance with a cache of oracle answers. The wrapped source keeps
// counting real oracle calls; the wrapper's own counters (stage "memo")
// count lookups.
HousingInstance memoized(const HousingInstance& inst);
RkkmInstance memoized(const RkkmInstance& inst);
KkmInstance memoized(const KkmInstance& inst);
SpernerInstance memoized(const SpernerInstance& inst);

}  // namespace gale
