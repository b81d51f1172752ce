#include "gale/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "gale/geometry.hpp"

namespace gale {

using nlohmann::json;

QueryLedger::Counter& QueryLedger::counter(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto& slot = counters_[id];
  if (!slot) slot = std::make_unique<Counter>(0);
  return *slot;
}

std::uint64_t QueryLedger::count(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = counters_.find(id);
  return it == counters_.end() ? 0 : it->second->load();
}

std::uint64_t QueryLedger::total() const { return total(""); }

std::uint64_t QueryLedger::total(std::string_view prefix) const {
  std::lock_guard lock(mutex_);
  std::uint64_t sum = 0;
  for (const auto& [id, c] : counters_) {
    if (std::string_view(id).substr(0, prefix.size()) == prefix) sum += c->load();
  }
  return sum;
}

LedgerSnapshot QueryLedger::snapshot() const {
  std::lock_guard lock(mutex_);
  LedgerSnapshot out;
  for (const auto& [id, c] : counters_) out[id] = c->load();
  return out;
}

std::string QueryLedger::fresh_stage(const std::string& base) {
  std::lock_guard lock(mutex_);
  int uses = ++stages_[base];
  return uses == 1 ? base : base + "#" + std::to_string(uses);
}

std::string OracleAccount::counter_id(std::string_view kind, int index) const {
  std::string id;
  if (!stage.empty()) id = stage + "/";
  id += kind;
  if (index >= 0) id += "[" + std::to_string(index) + "]";
  return id;
}

namespace {

OracleAccount open_account(std::shared_ptr<QueryLedger> ledger, const std::string& stage,
                           std::string_view kind, int count) {
  OracleAccount acc;
  acc.ledger = ledger ? std::move(ledger) : std::make_shared<QueryLedger>();
  acc.stage = stage;
  if (count < 0) {
    acc.counters.push_back(&acc.ledger->counter(acc.counter_id(kind, -1)));
  } else {
    for (int i = 0; i < count; ++i) acc.counters.push_back(&acc.ledger->counter(acc.counter_id(kind, i)));
  }
  return acc;
}

void tick(QueryLedger::Counter* c) { c->fetch_add(1, std::memory_order_relaxed); }

void check_index(int i, int lo, int hi, const char* what) {
  if (i < lo || i >= hi) {
    throw IndexOutOfRange(std::string(what) + " index " + std::to_string(i) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

void check_size(const Point& x, int n, const char* what) {
  if (x.size() != n) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(n) +
                            ", got " + std::to_string(x.size()));
  }
}

void check_interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < -kTol || b > 1.0 + kTol || a > b + kTol) {
    throw InvalidInterval("utility interval [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] is not inside [0,1]");
  }
}

}  // namespace

HousingInstance make_housing_instance(int n, PreferenceOracle oracle, json descriptor,
                                      std::shared_ptr<QueryLedger> ledger, const std::string& stage) {
  require_dimension(n, "housing instance");
  HousingInstance inst;
  inst.n = n;
  inst.oracle = std::move(oracle);
  inst.descriptor = std::move(descriptor);
  inst.account = open_account(std::move(ledger), stage, "preference", n);
  return inst;
}

RkkmInstance make_rkkm_instance(int n, CoveringOracle oracle, bool sparse, json descriptor,
                                std::shared_ptr<QueryLedger> ledger, const std::string& stage) {
  require_dimension(n, "rkkm instance");
  RkkmInstance inst;
  inst.n = n;
  inst.oracle = std::move(oracle);
  inst.sparse = sparse;
  inst.descriptor = std::move(descriptor);
  inst.account = open_account(std::move(ledger), stage, "covering", n);
  return inst;
}

KkmInstance make_kkm_instance(int n, double scale, KkmOracle oracle, bool sparse, json descriptor,
                              std::shared_ptr<QueryLedger> ledger, const std::string& stage) {
  require_dimension(n, "kkm instance");
  if (!(scale > 0) || !std::isfinite(scale)) throw DomainError("kkm instance: scale must be positive");
  KkmInstance inst;
  inst.n = n;
  inst.scale = scale;
  inst.oracle = std::move(oracle);
  inst.sparse = sparse;
  inst.descriptor = std::move(descriptor);
  inst.account = open_account(std::move(ledger), stage, "kkm", -1);
  return inst;
}

CakeInstance make_cake_instance(int d, double lipschitz, UtilityOracle oracle, json descriptor,
                                std::shared_ptr<QueryLedger> ledger, const std::string& stage) {
  require_dimension(d, "cake instance");
  CakeInstance inst;
  inst.d = d;
  inst.lipschitz = lipschitz;
  inst.oracle = std::move(oracle);
  inst.descriptor = std::move(descriptor);
  inst.account = open_account(std::move(ledger), stage, "utility", d);
  return inst;
}

SpernerInstance make_sperner_instance(SpernerKind kind, int d, int N, ColorOracle oracle,
                                      json descriptor, std::shared_ptr<QueryLedger> ledger,
                                      const std::string& stage) {
  if (kind == SpernerKind::Triangle) d = 2;
  require_dimension(d, "sperner instance");
  if (N < 1) throw DomainError("sperner instance: N must be at least 1");
  SpernerInstance inst;
  inst.kind = kind;
  inst.d = d;
  inst.N = N;
  inst.oracle = std::move(oracle);
  inst.descriptor = std::move(descriptor);
  inst.account = open_account(std::move(ledger), stage, "color", -1);
  return inst;
}

bool query_preference(const HousingInstance& inst, int agent, const Point& prices, int house) {
  return query_preference(inst, *inst.account.ledger, agent, prices, house);
}

bool query_preference(const HousingInstance& inst, QueryLedger& ledger, int agent,
                      const Point& prices, int house) {
  check_index(agent, 0, inst.n, "agent");
  check_index(house, kNothing, inst.n, "house");
  check_size(prices, inst.n, "query_preference");
  if (!prices.allFinite()) throw DomainError("query_preference: non-finite prices");
  if (&ledger == inst.account.ledger.get()) {
    tick(inst.account.counters[agent]);
  } else {
    tick(&ledger.counter(inst.account.counter_id("preference", agent)));
  }
  return inst.oracle(agent, prices, house);
}

bool query_covering(const RkkmInstance& inst, int covering, const Point& x, int set) {
  return query_covering(inst, *inst.account.ledger, covering, x, set);
}

bool query_covering(const RkkmInstance& inst, QueryLedger& ledger, int covering, const Point& x,
                    int set) {
  check_index(covering, 0, inst.n, "covering");
  check_index(set, 0, inst.n, "set");
  check_size(x, inst.n, "query_covering");
  if (!in_simplex(x)) throw DomainError("query_covering: point outside the simplex");
  if (&ledger == inst.account.ledger.get()) {
    tick(inst.account.counters[covering]);
  } else {
    tick(&ledger.counter(inst.account.counter_id("covering", covering)));
  }
  return inst.oracle(covering, x, set);
}

bool query_kkm_covering(const KkmInstance& inst, const Point& x, int set) {
  check_index(set, 0, inst.n, "set");
  check_size(x, inst.n, "query_kkm_covering");
  const double tol = kTol * std::max(1.0, inst.scale);
  if (!x.allFinite() || x.minCoeff() < -tol || std::abs(x.sum() - inst.scale) > tol) {
    throw DomainError("query_kkm_covering: point outside the scaled simplex");
  }
  tick(inst.account.counters[0]);
  return inst.oracle(x, set);
}

double eval_cake_utility(const CakeInstance& inst, int player, double a, double b) {
  return eval_cake_utility(inst, *inst.account.ledger, player, a, b);
}

double eval_cake_utility(const CakeInstance& inst, QueryLedger& ledger, int player, double a,
                         double b) {
  check_index(player, 0, inst.d, "player");
  check_interval(a, b);
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, a, 1.0);
  if (&ledger == inst.account.ledger.get()) {
    tick(inst.account.counters[player]);
  } else {
    tick(&ledger.counter(inst.account.counter_id("utility", player)));
  }
  return inst.oracle(player, a, b);
}

int query_color(const SpernerInstance& inst, const Lattice& v) {
  if (v.size() != inst.coords()) {
    throw DimensionMismatch("query_color: vertex has " + std::to_string(v.size()) +
                            " coordinates, expected " + std::to_string(inst.coords()));
  }
  if (v.minCoeff() < 0 || v.maxCoeff() > inst.N) throw DomainError("query_color: vertex outside the grid");
  if (inst.kind == SpernerKind::Triangle && v.sum() != inst.N) {
    throw DomainError("query_color: triangle vertex does not sum to N");
  }
  tick(inst.account.counters[0]);
  return inst.oracle(v);
}

HousingInstance make_quasilinear_market(const Eigen::MatrixXd& values) {
  const int n = static_cast<int>(values.rows());
  if (n < 1 || values.cols() != n) throw InvalidValues("quasilinear market: values must be a square n x n matrix");
  require_dimension(n, "quasilinear market");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v) || v <= 0.0 || v >= 1.0) {
        throw InvalidValues("quasilinear market: values[" + std::to_string(i) + "][" +
                            std::to_string(j) + "] = " + std::to_string(v) + " not in (0,1)");
      }
    }
  }
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(values(i, j));
    rows.push_back(row);
  }
  // House j is demanded when v_ij - p_j is non-negative and maximal.
  auto oracle = [values](int agent, const Point& p, int house) {
    if (house == kNothing) return true;
    const double own = values(agent, house) - p[house];
    if (own < -kOracleTol) return false;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (values(agent, k) - p[k] > own + kOracleTol) return false;
    }
    return true;
  };
  return make_housing_instance(n, oracle, json{{"kind", "housing-quasilinear"}, {"values", rows}});
}

namespace {

void check_weights(const Point& w) {
  require_dimension(static_cast<int>(w.size()), "weighted-argmax covering");
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] <= 0.0) {
      throw InvalidWeights("weighted-argmax covering: weight " + std::to_string(i) + " = " +
                           std::to_string(w[i]) + " is not positive");
    }
  }
}

// x belongs to set j when x_j / w_j is maximal.
bool weighted_argmax(const Point& w, const Point& x, int set) {
  const double mine = x[set] / w[set];
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] / w[k] > mine + kOracleTol) return false;
  }
  return true;
}

}  // namespace

KkmInstance make_weighted_argmax_covering(const Point& weights) {
  check_weights(weights);
  const int n = static_cast<int>(weights.size());
  auto oracle = [weights](const Point& x, int set) { return weighted_argmax(weights, x, set); };
  return make_kkm_instance(n, 1.0, oracle, true,
                           json{{"kind", "kkm-weighted-argmax"}, {"weights", to_std(weights)}});
}

RkkmInstance make_weighted_argmax_rkkm(const std::vector<Point>& weights) {
  const int n = static_cast<int>(weights.size());
  require_dimension(n, "weighted-argmax rkkm");
  json rows = json::array();
  for (const auto& w : weights) {
    check_weights(w);
    if (w.size() != n) throw InvalidWeights("weighted-argmax rkkm: each covering needs n weights");
    rows.push_back(to_std(w));
  }
  auto oracle = [weights](int covering, const Point& x, int set) {
    return weighted_argmax(weights[covering], x, set);
  };
  return make_rkkm_instance(n, oracle, true, json{{"kind", "kkm-weighted-argmax"}, {"weights", rows}});
}

CakeInstance make_piecewise_cake(const std::vector<std::vector<DensitySegment>>& players) {
  const int d = static_cast<int>(players.size());
  require_dimension(d, "piecewise cake");
  struct Profile {
    std::vector<double> breaks;   // segment starts, then 1
    std::vector<double> density;  // per segment
    std::vector<double> mass;     // cumulative mass at each break
  };
  std::vector<Profile> profiles;
  double lipschitz = 0.0;
  json desc = json::array();
  for (int i = 0; i < d; ++i) {
    const auto& segs = players[i];
    const std::string who = "player " + std::to_string(i);
    if (segs.empty()) throw InvalidDensity(who + ": no density segments");
    Profile prof;
    json jsegs = json::array();
    double at = 0.0;
    for (size_t s = 0; s < segs.size(); ++s) {
      const auto& seg = segs[s];
      const std::string where = who + " segment " + std::to_string(s);
      if (!std::isfinite(seg.from) || !std::isfinite(seg.to) || !std::isfinite(seg.density)) {
        throw InvalidDensity(where + ": non-finite value");
      }
      if (std::abs(seg.from - at) > kTol) {
        throw InvalidDensity(where + (seg.from > at ? ": gap before " : ": overlap at ") +
                             std::to_string(seg.from));
      }
      if (seg.to <= seg.from) throw InvalidDensity(where + ": empty or reversed segment");
      if (seg.density <= 0.0) throw InvalidDensity(where + ": density must be positive");
      prof.breaks.push_back(at);
      prof.density.push_back(seg.density);
      lipschitz = std::max(lipschitz, seg.density);
      at = seg.to;
      jsegs.push_back(json{{"from", seg.from}, {"to", seg.to}, {"density", seg.density}});
    }
    if (std::abs(at - 1.0) > kTol) throw InvalidDensity(who + ": segments end at " + std::to_string(at) + ", not 1");
    prof.breaks.push_back(1.0);
    prof.mass.assign(prof.breaks.size(), 0.0);
    for (size_t s = 0; s + 1 < prof.breaks.size(); ++s) {
      prof.mass[s + 1] = prof.mass[s] + prof.density[s] * (prof.breaks[s + 1] - prof.breaks[s]);
    }
    profiles.push_back(std::move(prof));
    desc.push_back(jsegs);
  }
  auto oracle = [profiles = std::move(profiles)](int player, double a, double b) {
    const Profile& prof = profiles[player];
    auto cumulative = [&](double t) {
      auto it = std::upper_bound(prof.breaks.begin(), prof.breaks.end() - 1, t);
      const size_t s = static_cast<size_t>(it - prof.breaks.begin()) - 1;
      return prof.mass[s] + prof.density[s] * (t - prof.breaks[s]);
    };
    if (b <= a) return 0.0;
    return cumulative(b) - cumulative(a);
  };
  return make_cake_instance(d, lipschitz, oracle, json{{"kind", "cake-piecewise"}, {"players", desc}});
}

std::size_t triangle_index(int N, const Lattice& v) {
  // Rows v0 = 0, 1, ... hold N+1, N, ... vertices.
  const std::size_t a = static_cast<std::size_t>(v[0]);
  const std::size_t before = a == 0 ? 0 : a * static_cast<std::size_t>(N + 1) - a * (a - 1) / 2;
  return before + static_cast<std::size_t>(v[1]);
}

std::size_t cube_index(int N, const Lattice& v) {
  std::size_t idx = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) idx = idx * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(v[k]);
  return idx;
}

Lattice cube_vertex(int d, int N, std::size_t index) {
  Lattice v(d);
  for (int k = d - 1; k >= 0; --k) {
    v[k] = static_cast<int>(index % static_cast<std::size_t>(N + 1));
    index /= static_cast<std::size_t>(N + 1);
  }
  return v;
}

namespace {

void check_colors(const std::vector<int>& colors, std::size_t expected, int palette, const char* what) {
  if (colors.size() != expected) {
    throw InputError(std::string(what) + ": colors has " + std::to_string(colors.size()) +
                     " entries, expected " + std::to_string(expected));
  }
  for (size_t i = 0; i < colors.size(); ++i) {
    if (colors[i] < 0 || colors[i] >= palette) {
      throw InputError(std::string(what) + ": colors[" + std::to_string(i) + "] = " +
                       std::to_string(colors[i]) + " outside [0, " + std::to_string(palette) + ")");
    }
  }
}

}  // namespace

SpernerInstance make_sperner_triangle(int N, std::vector<int> colors) {
  if (N < 1) throw DomainError("sperner triangle: N must be at least 1");
  const std::size_t count = static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(N + 2) / 2;
  check_colors(colors, count, 3, "sperner triangle");
  json desc{{"kind", "sperner-triangle"}, {"N", N}, {"colors", colors}};
  auto table = std::make_shared<const std::vector<int>>(std::move(colors));
  auto oracle = [table, N](const Lattice& v) { return (*table)[triangle_index(N, v)]; };
  return make_sperner_instance(SpernerKind::Triangle, 2, N, oracle, std::move(desc));
}

SpernerInstance make_sperner_triangle(int N, ColorOracle oracle) {
  return make_sperner_instance(SpernerKind::Triangle, 2, N, std::move(oracle),
                               json{{"kind", "sperner-triangle"}, {"N", N}, {"colors", nullptr}});
}

SpernerInstance make_sperner_cube(int d, int N, std::vector<int> colors) {
  require_dimension(d, "sperner cube");
  if (N < 1) throw DomainError("sperner cube: N must be at least 1");
  std::size_t count = 1;
  for (int k = 0; k < d; ++k) count *= static_cast<std::size_t>(N + 1);
  check_colors(colors, count, d + 1, "sperner cube");
  json desc{{"kind", "sperner-cube"}, {"d", d}, {"N", N}, {"colors", colors}};
  auto table = std::make_shared<const std::vector<int>>(std::move(colors));
  auto oracle = [table, N](const Lattice& v) { return (*table)[cube_index(N, v)]; };
  return make_sperner_instance(SpernerKind::Cube, d, N, oracle, std::move(desc));
}

SpernerInstance make_sperner_cube(int d, int N, ColorOracle oracle) {
  return make_sperner_instance(SpernerKind::Cube, d, N, std::move(oracle),
                               json{{"kind", "sperner-cube"}, {"d", d}, {"N", N}, {"colors", nullptr}});
}

namespace {

template <typename Value>
class AnswerCache {
 public:
  template <typename Compute>
  Value get(const std::string& key, Compute&& compute) {
    {
      std::lock_guard lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard lock(mutex_);
    map_.emplace(key, v);
    return v;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, Value> map_;
};

template <typename Vec>
std::string cache_key(int a, int b, const Vec& x) {
  using Scalar = typename Vec::Scalar;
  std::string key(2 * sizeof(int) + static_cast<size_t>(x.size()) * sizeof(Scalar), '\0');
  std::memcpy(key.data(), &a, sizeof(int));
  std::memcpy(key.data() + sizeof(int), &b, sizeof(int));
  std::memcpy(key.data() + 2 * sizeof(int), x.data(), static_cast<size_t>(x.size()) * sizeof(Scalar));
  return key;
}

}  // namespace

HousingInstance memoized(const HousingInstance& inst) {
  auto cache = std::make_shared<AnswerCache<bool>>();
  auto oracle = [inst, cache](int agent, const Point& p, int house) {
    return cache->get(cache_key(agent, house, p), [&] { return query_preference(inst, agent, p, house); });
  };
  return make_housing_instance(inst.n, oracle, inst.descriptor, inst.account.ledger,
                               inst.account.ledger->fresh_stage("memo"));
}

RkkmInstance memoized(const RkkmInstance& inst) {
  auto cache = std::make_shared<AnswerCache<bool>>();
  auto oracle = [inst, cache](int covering, const Point& x, int set) {
    return cache->get(cache_key(covering, set, x), [&] { return query_covering(inst, covering, x, set); });
  };
  return make_rkkm_instance(inst.n, oracle, inst.sparse, inst.descriptor, inst.account.ledger,
                            inst.account.ledger->fresh_stage("memo"));
}

KkmInstance memoized(const KkmInstance& inst) {
  auto cache = std::make_shared<AnswerCache<bool>>();
  auto oracle = [inst, cache](const Point& x, int set) {
    return cache->get(cache_key(0, set, x), [&] { return query_kkm_covering(inst, x, set); });
  };
  return make_kkm_instance(inst.n, inst.scale, oracle, inst.sparse, inst.descriptor, inst.account.ledger,
                           inst.account.ledger->fresh_stage("memo"));
}

SpernerInstance memoized(const SpernerInstance& inst) {
  auto cache = std::make_shared<AnswerCache<int>>();
  auto oracle = [inst, cache](const Lattice& v) {
    return cache->get(cache_key(0, 0, v), [&] { return query_color(inst, v); });
  };
  return make_sperner_instance(inst.kind, inst.d, inst.N, oracle, inst.descriptor, inst.account.ledger,
                               inst.account.ledger->fresh_stage("memo"));
}

}  // namespace gale
