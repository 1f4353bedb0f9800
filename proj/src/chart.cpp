#include "prepot/chart.hpp"

#include <stdexcept>
#include <tuple>

namespace prepot {
namespace {

Chart make_chart(std::string name, CoordinateNames coords,
                 std::initializer_list<std::tuple<int, int, const char*>> nonzero,
                 std::optional<const char*> admit, std::array<Interval, kDim> box) {
  Chart c;
  c.name = std::move(name);
  c.coordinates = std::move(coords);
  for (const auto& [a, b, text] : nonzero) c.metric[sym_index(a, b)] = parse(text, c.coordinates);
  if (admit) c.admit = parse(*admit, c.coordinates);
  c.default_box = box;
  return c;
}

std::vector<Chart> make_builtins() {
  constexpr Interval unit{-1.0, 1.0};
  constexpr Interval radial{kDefaultRMin, 1.0};
  std::vector<Chart> charts;
  charts.push_back(make_chart("cartesian", {"t", "x", "y", "z"},
                              {{0, 0, "1"}, {1, 1, "-1"}, {2, 2, "-1"}, {3, 3, "-1"}}, std::nullopt,
                              {unit, unit, unit, unit}));
  // Overall signature (+,-,-,-), matching the cartesian chart.
  charts.push_back(make_chart("cylindrical", {"t", "r", "theta", "z"},
                              {{0, 0, "1"}, {1, 1, "-1"}, {2, 2, "-r^2"}, {3, 3, "-1"}},
                              "r - 0.05", {unit, radial, unit, unit}));
  charts.push_back(make_chart("lightlike", {"u", "v", "y", "z"},
                              {{0, 1, "1"}, {2, 2, "1"}, {3, 3, "1"}}, std::nullopt,
                              {unit, unit, unit, unit}));
  charts.push_back(make_chart("lightlike_cylindrical", {"u", "v", "r", "theta"},
                              {{0, 1, "1"}, {2, 2, "1"}, {3, 3, "r^2"}}, "r - 0.05",
                              {unit, unit, radial, unit}));
  return charts;
}

}  // namespace

const std::vector<Chart>& builtin_charts() {
  static const std::vector<Chart> charts = make_builtins();
  return charts;
}

const Chart& builtin_chart(std::string_view name) {
  for (const auto& c : builtin_charts()) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("unknown chart '" + std::string(name) + "'");
}

MetricJet base_metric(const Chart& chart, const Point& point, const ParamBinding& params) {
  MetricJet g;
  for (int a = 0; a < kDim; ++a)
    for (int b = a; b < kDim; ++b) g(a, b) = eval_jet(chart.metric[sym_index(a, b)], point, params);
  return g;
}

bool is_admissible(const Chart& chart, const Point& point, const ParamBinding& params) {
  if (!chart.admit) return true;
  return eval_value(*chart.admit, point, params).real() >= 0.0;
}

bool is_minkowski(const Chart& chart, const ParamBinding& params) {
  constexpr std::array<double, kDim> eta = {1.0, -1.0, -1.0, -1.0};
  for (int a = 0; a < kDim; ++a) {
    for (int b = a; b < kDim; ++b) {
      const Expr& e = chart.metric[sym_index(a, b)];
      if (!free_coordinates(e).empty()) return false;
      const cplx v = eval_value(e, Point{}, params);
      if (v != cplx{a == b ? eta[a] : 0.0}) return false;
    }
  }
  return true;
}

Jet wave_operator(const Jet& u, const Chart& chart, const Point& point, const ParamBinding& params) {
  return wave_operator(u, base_metric(chart, point, params));
}

}  // namespace prepot
