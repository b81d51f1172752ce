#include "gale/instance_io.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace gale {

using nlohmann::json;

namespace {

const json& field(const json& doc, const std::string& name, const std::string& where) {
  if (!doc.is_object()) throw InputError(where + ": expected an object");
  auto it = doc.find(name);
  if (it == doc.end()) throw InputError(where + ": missing field \"" + name + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<int>();
}

const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array");
  return v;
}

Point point_of(const json& v, const std::string& where) {
  array(v, where);
  if (v.empty() || v.size() > static_cast<size_t>(kMaxDim)) {
    throw InputError(where + ": expected 1 to " + std::to_string(kMaxDim) + " entries");
  }
  Point p(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = number(v[i], where + "[" + std::to_string(i) + "]");
  return p;
}

std::vector<int> ints_of(const json& v, const std::string& where) {
  array(v, where);
  std::vector<int> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Lattice lattice_of(const json& v, const std::string& where) {
  const auto xs = ints_of(v, where);
  if (xs.empty() || xs.size() > static_cast<size_t>(kMaxDim)) throw InputError(where + ": bad vertex size");
  Lattice out(static_cast<Eigen::Index>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) out[static_cast<Eigen::Index>(i)] = xs[i];
  return out;
}

AnyInstance housing_from_json(const json& doc) {
  const json& rows = array(field(doc, "values", "housing-quasilinear"), "values");
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InputError("values: empty matrix");
  Eigen::MatrixXd values(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string where = "values[" + std::to_string(i) + "]";
    const json& row = array(rows[i], where);
    if (static_cast<int>(row.size()) != n) throw InputError(where + ": expected " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) values(i, j) = number(row[j], where + "[" + std::to_string(j) + "]");
  }
  return make_quasilinear_market(values);
}

AnyInstance argmax_from_json(const json& doc) {
  const json& weights = array(field(doc, "weights", "kkm-weighted-argmax"), "weights");
  if (weights.empty()) throw InputError("weights: empty");
  if (weights[0].is_array()) {
    std::vector<Point> rows;
    for (size_t i = 0; i < weights.size(); ++i) rows.push_back(point_of(weights[i], "weights[" + std::to_string(i) + "]"));
    return make_weighted_argmax_rkkm(rows);
  }
  return make_weighted_argmax_covering(point_of(weights, "weights"));
}

AnyInstance cake_from_json(const json& doc) {
  const json& players = array(field(doc, "players", "cake-piecewise"), "players");
  std::vector<std::vector<DensitySegment>> segs;
  for (size_t i = 0; i < players.size(); ++i) {
    const std::string where = "players[" + std::to_string(i) + "]";
    const json& list = array(players[i], where);
    std::vector<DensitySegment> mine;
    for (size_t s = 0; s < list.size(); ++s) {
      const std::string at = where + "[" + std::to_string(s) + "]";
      mine.push_back({number(field(list[s], "from", at), at + ".from"), number(field(list[s], "to", at), at + ".to"),
                      number(field(list[s], "density", at), at + ".density")});
    }
    segs.push_back(std::move(mine));
  }
  return make_piecewise_cake(segs);
}

AnyInstance triangle_from_json(const json& doc) {
  const int N = integer(field(doc, "N", "sperner-triangle"), "N");
  if (N < 1) throw InputError("N: must be at least 1");
  return make_sperner_triangle(N, ints_of(field(doc, "colors", "sperner-triangle"), "colors"));
}

AnyInstance cube_from_json(const json& doc) {
  const int d = integer(field(doc, "d", "sperner-cube"), "d");
  const int N = integer(field(doc, "N", "sperner-cube"), "N");
  if (d < 1 || d > kMaxDim) throw InputError("d: must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (N < 1) throw InputError("N: must be at least 1");
  return make_sperner_cube(d, N, ints_of(field(doc, "colors", "sperner-cube"), "colors"));
}

template <typename T>
const T& expect(const AnyInstance& inst, const std::string& reduction) {
  if (const T* p = std::get_if<T>(&inst)) return *p;
  throw NoSuchReduction(reduction + " does not accept a " + problem_kind(inst) + " instance");
}

template <typename R>
ReductionStep step_of(R&& r) {
  return {r.name, r.source_epsilon, r.target_epsilon, AnyInstance(std::move(r.target))};
}

}  // namespace

std::string problem_kind(const AnyInstance& inst) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HousingInstance>) return "housing";
        if constexpr (std::is_same_v<T, RkkmInstance>) return "rkkm";
        if constexpr (std::is_same_v<T, KkmInstance>) return "kkm";
        if constexpr (std::is_same_v<T, CakeInstance>) return "cake";
        if constexpr (std::is_same_v<T, SpernerInstance>) {
          return x.kind == SpernerKind::Triangle ? "sperner-triangle" : "sperner-cube";
        }
      },
      inst);
}

const json& descriptor_of(const AnyInstance& inst) {
  return std::visit([](const auto& x) -> const json& { return x.descriptor; }, inst);
}

QueryLedger& ledger_of(const AnyInstance& inst) {
  return std::visit([](const auto& x) -> QueryLedger& { return *x.account.ledger; }, inst);
}

AnyInstance instance_from_json(const json& doc) {
  const json& kind_field = field(doc, "kind", "instance");
  if (!kind_field.is_string()) throw InputError("kind: expected a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "housing-quasilinear") return housing_from_json(doc);
  if (kind == "kkm-weighted-argmax") return argmax_from_json(doc);
  if (kind == "cake-piecewise") return cake_from_json(doc);
  if (kind == "sperner-triangle") return triangle_from_json(doc);
  if (kind == "sperner-cube") return cube_from_json(doc);
  if (kind == "composed") {
    AnyInstance current = instance_from_json(field(doc, "source", "composed"));
    const json& chain = array(field(doc, "chain", "composed"), "chain");
    for (size_t i = 0; i < chain.size(); ++i) {
      const std::string where = "chain[" + std::to_string(i) + "]";
      const json& name = field(chain[i], "reduction", where);
      if (!name.is_string()) throw InputError(where + ".reduction: expected a string");
      const json& eps = field(chain[i], "epsilon", where);
      current = apply_reduction(current, name.get<std::string>(), eps.is_null() ? 0.0 : number(eps, where + ".epsilon"))
                    .target;
    }
    return current;
  }
  throw InputError("kind: unknown instance kind \"" + kind + "\"");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

AnyInstance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

ReductionStep apply_reduction(const AnyInstance& inst, const std::string& name, double epsilon) {
  if (name == "lift_market") return step_of(lift_market(expect<HousingInstance>(inst, name), epsilon));
  if (name == "housing_to_rkkm") return step_of(housing_to_rkkm(expect<HousingInstance>(inst, name), epsilon));
  if (name == "rkkm_to_housing") return step_of(rkkm_to_housing(expect<RkkmInstance>(inst, name), epsilon));
  if (name == "sparsify") return step_of(sparsify(expect<RkkmInstance>(inst, name), epsilon));
  if (name == "rkkm_to_sperner") return step_of(rkkm_to_sperner(expect<RkkmInstance>(inst, name), epsilon));
  if (name == "cake_to_rkkm") return step_of(cake_to_rkkm(expect<CakeInstance>(inst, name), epsilon));
  if (name == "kkm_to_rkkm") return step_of(kkm_to_rkkm(expect<KkmInstance>(inst, name), epsilon));
  if (name == "sperner2d_to_kkm") {
    const auto& s = expect<SpernerInstance>(inst, name);
    if (s.kind != SpernerKind::Triangle) throw NoSuchReduction(name + " does not accept a sperner-cube instance");
    return step_of(sperner2d_to_kkm(s));
  }
  throw NoSuchReduction("unknown reduction \"" + name + "\"");
}

std::vector<std::string> reduction_path(const std::string& from, const std::string& to) {
  static const std::multimap<std::string, std::pair<std::string, std::string>> edges{
      {"housing", {"rkkm", "housing_to_rkkm"}},     {"rkkm", {"housing", "rkkm_to_housing"}},
      {"rkkm", {"sperner-cube", "rkkm_to_sperner"}}, {"cake", {"rkkm", "cake_to_rkkm"}},
      {"sperner-triangle", {"kkm", "sperner2d_to_kkm"}}, {"kkm", {"rkkm", "kkm_to_rkkm"}},
  };
  static const std::map<std::string, std::string> self{{"housing", "lift_market"}, {"rkkm", "sparsify"}};
  const std::vector<std::string> kinds{"housing", "rkkm", "kkm", "cake", "sperner-triangle", "sperner-cube"};
  auto known = [&](const std::string& k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
  if (!known(from) || !known(to)) throw NoSuchReduction("unknown problem kind in " + from + " -> " + to);
  if (from == to) {
    auto it = self.find(from);
    if (it == self.end()) throw NoSuchReduction("no reduction from " + from + " to itself");
    return {it->second};
  }
  std::map<std::string, std::pair<std::string, std::string>> parent;  // node -> (previous, reduction)
  std::deque<std::string> queue{from};
  parent[from] = {"", ""};
  while (!queue.empty()) {
    const std::string at = queue.front();
    queue.pop_front();
    auto [lo, hi] = edges.equal_range(at);
    for (auto it = lo; it != hi; ++it) {
      const auto& [next, name] = it->second;
      if (parent.count(next)) continue;
      parent[next] = {at, name};
      queue.push_back(next);
    }
  }
  if (!parent.count(to)) throw NoSuchReduction("no reduction chain from " + from + " to " + to);
  std::vector<std::string> path;
  for (std::string at = to; at != from; at = parent[at].first) path.insert(path.begin(), parent[at].second);
  return path;
}

RkkmInstance as_rkkm(const AnyInstance& inst) {
  if (const auto* r = std::get_if<RkkmInstance>(&inst)) return *r;
  if (const auto* k = std::get_if<KkmInstance>(&inst)) {
    if (k->scale != 1.0) throw InputError("instance: a scaled KKM covering cannot be read as Rainbow-KKM");
    return kkm_to_rkkm(*k, 1.0).target;
  }
  throw InputError("instance: a " + problem_kind(inst) + " instance cannot be read as Rainbow-KKM");
}

namespace {

LedgerSnapshot ledger_snapshot_of(const json& j) {
  if (!j.is_object()) throw InputError("ledger: expected an object of counters");
  LedgerSnapshot out;
  for (const auto& [id, count] : j.items()) {
    if (!count.is_number_unsigned() && !(count.is_number_integer() && count.get<long long>() >= 0)) {
      throw InputError("ledger." + id + ": expected a non-negative count");
    }
    out[id] = count.get<std::uint64_t>();
  }
  return out;
}

}  // namespace

json solution_to_json(const Solution& sol) {
  json witnesses = json::array();
  for (const auto& w : sol.witnesses) witnesses.push_back(to_std(w));
  return json{{"point", to_std(sol.point)},
              {"perm", sol.perm},
              {"witnesses", witnesses},
              {"epsilon_achieved", sol.epsilon_achieved},
              {"ledger", sol.ledger}};
}

Solution solution_from_json(const json& doc) {
  Solution sol;
  sol.point = point_of(field(doc, "point", "solution"), "point");
  sol.perm = ints_of(field(doc, "perm", "solution"), "perm");
  if (doc.contains("witnesses")) {
    const json& ws = array(doc["witnesses"], "witnesses");
    for (size_t i = 0; i < ws.size(); ++i) sol.witnesses.push_back(point_of(ws[i], "witnesses[" + std::to_string(i) + "]"));
  }
  if (doc.contains("epsilon_achieved")) sol.epsilon_achieved = number(doc["epsilon_achieved"], "epsilon_achieved");
  if (doc.contains("ledger")) sol.ledger = ledger_snapshot_of(doc["ledger"]);
  return sol;
}

json solution_to_json(const SpernerSolution& sol) {
  json vertices = json::array();
  for (const auto& v : sol.vertices) vertices.push_back(to_std(v));
  return json{{"cell", {{"anchor", to_std(sol.cell.anchor)}, {"perm", sol.cell.perm.to_vector()}}},
              {"vertices", vertices},
              {"colors", sol.colors},
              {"ledger", sol.ledger}};
}

SpernerSolution sperner_solution_from_json(const json& doc) {
  SpernerSolution sol;
  const json& cell = field(doc, "cell", "solution");
  sol.cell.anchor = lattice_of(field(cell, "anchor", "cell"), "cell.anchor");
  const auto perm = ints_of(field(cell, "perm", "cell"), "cell.perm");
  if (!is_bijection(perm) || perm.size() != static_cast<size_t>(sol.cell.anchor.size())) {
    throw InputError("cell.perm: not a permutation of the anchor coordinates");
  }
  sol.cell.perm = Permutation(perm);
  sol.vertices = cell_vertices(sol.cell);
  if (doc.contains("colors")) sol.colors = ints_of(doc["colors"], "colors");
  if (doc.contains("ledger")) sol.ledger = ledger_snapshot_of(doc["ledger"]);
  return sol;
}

json solution_to_json(const TriangleSolution& sol) {
  json vertices = json::array();
  for (const auto& v : sol.cell.vertices) vertices.push_back(to_std(v));
  return json{{"cell", {{"vertices", vertices}, {"upward", sol.cell.upward}}},
              {"colors", sol.colors},
              {"trichromatic", sol.trichromatic},
              {"point", to_std(sol.point)},
              {"ledger", sol.ledger}};
}

TriangleSolution triangle_solution_from_json(const json& doc) {
  TriangleSolution sol;
  const json& cell = field(doc, "cell", "solution");
  const json& vertices = array(field(cell, "vertices", "cell"), "cell.vertices");
  if (vertices.size() != 3) throw InputError("cell.vertices: expected three vertices");
  for (int k = 0; k < 3; ++k) {
    sol.cell.vertices[k] = lattice_of(vertices[k], "cell.vertices[" + std::to_string(k) + "]");
    if (sol.cell.vertices[k].size() != 3) throw InputError("cell.vertices: expected three coordinates");
  }
  if (cell.contains("upward")) {
    if (!cell["upward"].is_boolean()) throw InputError("cell.upward: expected true or false");
    sol.cell.upward = cell["upward"].get<bool>();
  }
  if (doc.contains("colors")) {
    const auto colors = ints_of(doc["colors"], "colors");
    if (colors.size() != 3 || std::ranges::any_of(colors, [](int c) { return c < 0 || c > 2; })) {
      throw InputError("colors: expected three colours in 0..2");
    }
    std::copy(colors.begin(), colors.end(), sol.colors.begin());
  }
  sol.trichromatic = (1 << sol.colors[0] | 1 << sol.colors[1] | 1 << sol.colors[2]) == 7;
  if (doc.contains("point")) sol.point = point_of(doc["point"], "point");
  if (doc.contains("ledger")) sol.ledger = ledger_snapshot_of(doc["ledger"]);
  return sol;
}

}  // namespace gale
