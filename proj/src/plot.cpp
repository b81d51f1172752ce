#include "gale/plot.hpp"

#include <array>
#include <functional>
#include <iomanip>
#include <sstream>

#include "gale/geometry.hpp"

namespace gale {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 16> kPalette{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                               "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                               "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
constexpr double kPanel = 360.0;
constexpr double kPad = 20.0;

const char* paint(int c) { return c >= 0 && c < 16 ? kPalette[c] : "#000000"; }

struct Xy {
  double x = 0.0;
  double y = 0.0;
};

// Simplex point (barycentric, sum 1) inside panel number `panel`.
Xy triangle_xy(const Point& b, int panel) {
  const double left = panel * (kPanel + kPad) + kPad;
  const double h = (kPanel - 2 * kPad) * 0.8660254037844386;
  const Xy top{left + kPanel / 2 - kPad, kPad};
  const Xy low_left{left, kPad + h};
  const Xy low_right{left + kPanel - 2 * kPad, kPad + h};
  return {b[0] * top.x + b[1] * low_left.x + b[2] * low_right.x, b[0] * top.y + b[1] * low_left.y + b[2] * low_right.y};
}

class Svg {
 public:
  Svg(double width, double height) {
    out_ << std::fixed << std::setprecision(2);
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
         << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void line(Xy a, Xy b, const char* stroke = "#999999") {
    out_ << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y << "\" stroke=\""
         << stroke << "\" stroke-width=\"0.8\"/>\n";
  }
  void dot(Xy p, double r, const char* fill, const char* cls) {
    out_ << "<circle class=\"" << cls << "\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r << "\" fill=\""
         << fill << "\"/>\n";
  }
  void marker(Xy p) {
    out_ << "<circle class=\"solution\" cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  void polygon(const std::vector<Xy>& pts) {
    out_ << "<polygon class=\"solution\" points=\"";
    for (const auto& p : pts) out_ << p.x << ',' << p.y << ' ';
    out_ << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  void text(Xy p, const std::string& s) {
    out_ << "<text x=\"" << p.x << "\" y=\"" << p.y << "\" font-size=\"12\" font-family=\"sans-serif\">" << s
         << "</text>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

std::string plot_triangle(const SpernerInstance& inst, const std::optional<json>& solution) {
  const int N = inst.N;
  Svg svg(kPanel, kPanel);
  auto at = [&](const Lattice& v) { return triangle_xy(v.cast<double>() / N, 0); };
  for (int a = 0; a < N; ++a) {
    for (int b = 0; a + b < N; ++b) {
      const Lattice base = make_lattice({a, b, N - 1 - a - b});
      std::array<Lattice, 3> corner{base, base, base};
      for (int k = 0; k < 3; ++k) corner[k][k] += 1;
      svg.line(at(corner[0]), at(corner[1]));
      svg.line(at(corner[1]), at(corner[2]));
      svg.line(at(corner[2]), at(corner[0]));
    }
  }
  for (int a = 0; a <= N; ++a) {
    for (int b = 0; a + b <= N; ++b) {
      const Lattice v = make_lattice({a, b, N - a - b});
      svg.dot(at(v), 5.0, paint(query_color(inst, v)), "vertex");
    }
  }
  if (solution && solution->contains("cell")) {
    std::vector<Xy> pts;
    for (const auto& v : (*solution)["cell"]["vertices"]) {
      pts.push_back(at(make_lattice({v[0].get<int>(), v[1].get<int>(), v[2].get<int>()})));
    }
    svg.polygon(pts);
  }
  return svg.finish();
}

// First set containing x, -1 when none does.
using PanelOracle = std::function<int(const Point& x)>;

std::string plot_coverings(const std::vector<PanelOracle>& panels, int resolution, const std::optional<Point>& mark) {
  const int count = static_cast<int>(panels.size());
  Svg svg(count * (kPanel + kPad) + kPad, kPanel);
  const double r = 0.45 * (kPanel - 2 * kPad) / resolution;
  for (int panel = 0; panel < count; ++panel) {
    svg.line(triangle_xy(make_point({1, 0, 0}), panel), triangle_xy(make_point({0, 1, 0}), panel), "#000000");
    svg.line(triangle_xy(make_point({0, 1, 0}), panel), triangle_xy(make_point({0, 0, 1}), panel), "#000000");
    svg.line(triangle_xy(make_point({0, 0, 1}), panel), triangle_xy(make_point({1, 0, 0}), panel), "#000000");
    for (int a = 0; a <= resolution; ++a) {
      for (int b = 0; a + b <= resolution; ++b) {
        const Point x = make_point({double(a), double(b), double(resolution - a - b)}) / resolution;
        svg.dot(triangle_xy(x, panel), r, paint(panels[panel](x)), "sample");
      }
    }
    if (count > 1) svg.text({panel * (kPanel + kPad) + kPad, kPanel - 8}, "covering " + std::to_string(panel));
    if (mark) svg.marker(triangle_xy(*mark, panel));
  }
  return svg.finish();
}

std::string plot_cube(const SpernerInstance& inst, const std::optional<json>& solution) {
  const int N = inst.N;
  const int d = inst.d;
  const double step = (kPanel - 2 * kPad) / N;
  // grid position of (a, b); the line case draws everything at mid height
  auto at = [&](int a, int b = 0) { return Xy{kPad + step * a, d == 1 ? kPanel / 2 : kPanel - kPad - step * b}; };
  Svg svg(kPanel, kPanel);
  if (d == 1) {
    svg.line(at(0), at(N));
    for (int a = 0; a <= N; ++a) svg.dot(at(a), 5.0, paint(query_color(inst, make_lattice({a}))), "vertex");
  } else {
    for (int k = 0; k <= N; ++k) {
      svg.line(at(k, 0), at(k, N));
      svg.line(at(0, k), at(N, k));
    }
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) svg.line(at(a, b), at(a + 1, b + 1));
    }
    for (int a = 0; a <= N; ++a) {
      for (int b = 0; b <= N; ++b) svg.dot(at(a, b), 4.0, paint(query_color(inst, make_lattice({a, b}))), "vertex");
    }
  }
  if (solution && solution->contains("vertices")) {
    std::vector<Xy> pts;
    for (const auto& v : (*solution)["vertices"]) pts.push_back(at(v[0].get<int>(), d > 1 ? v[1].get<int>() : 0));
    svg.polygon(pts);
  }
  return svg.finish();
}

std::optional<Point> solution_point(const std::optional<json>& solution) {
  if (!solution || !solution->contains("point")) return std::nullopt;
  const auto xs = (*solution)["point"].get<std::vector<double>>();
  if (xs.size() != 3) return std::nullopt;
  return make_point(xs);
}

}  // namespace

std::string plot_svg(const AnyInstance& inst, const std::optional<json>& solution, int resolution) {
  if (resolution < 1) throw DomainError("plot: resolution must be positive");
  if (const auto* s = std::get_if<SpernerInstance>(&inst)) {
    if (s->kind == SpernerKind::Triangle) return plot_triangle(*s, solution);
    if (s->d <= 2) return plot_cube(*s, solution);
    throw NotRenderable("plot: cube of dimension " + std::to_string(s->d) + " is not renderable");
  }
  if (const auto* k = std::get_if<KkmInstance>(&inst)) {
    if (k->n != 3) throw NotRenderable("plot: only three-set coverings are renderable");
    auto mark = solution_point(solution);
    if (mark) *mark /= k->scale;
    PanelOracle panel = [k](const Point& x) {
      for (int j = 0; j < 3; ++j) {
        if (query_kkm_covering(*k, Point(k->scale * x), j)) return j;
      }
      return -1;
    };
    return plot_coverings({panel}, resolution, mark);
  }
  RkkmInstance rkkm;
  std::optional<Point> mark = solution_point(solution);
  if (const auto* h = std::get_if<HousingInstance>(&inst)) {
    if (h->n != 3) throw NotRenderable("plot: only three-agent markets are renderable");
    rkkm = housing_to_rkkm(*h, 1.0).target;
    if (mark) {
      mark = in_price_domain(*mark) ? std::optional<Point>(phi(*mark)) : std::nullopt;
    }
  } else if (const auto* c = std::get_if<CakeInstance>(&inst)) {
    if (c->d != 3) throw NotRenderable("plot: only three-player cakes are renderable");
    rkkm = cake_to_rkkm(*c, 1.0).target;
  } else {
    rkkm = std::get<RkkmInstance>(inst);
    if (rkkm.n != 3) throw NotRenderable("plot: only three coverings are renderable, got " + std::to_string(rkkm.n));
  }
  std::vector<PanelOracle> panels;
  for (int i = 0; i < 3; ++i) {
    panels.push_back([rkkm, i](const Point& x) {
      for (int j = 0; j < 3; ++j) {
        if (query_covering(rkkm, i, x, j)) return j;
      }
      return -1;
    });
  }
  if (mark && !in_simplex(*mark)) mark.reset();
  return plot_coverings(panels, resolution, mark);
}

}  // namespace gale
