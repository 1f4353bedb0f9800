#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prepot/expr.hpp"
#include "prepot/geometry.hpp"

namespace prepot {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// A named coordinate system carrying a flat base metric.
struct Chart {
  std::string name;
  CoordinateNames coordinates;
  /// Packed symmetric components, indexed by sym_index(a, b).
  std::array<Expr, 10> metric;
  /// Points with re(admit) < 0 are excluded (coordinate singularities).
  std::optional<Expr> admit;
  std::array<Interval, kDim> default_box{};
};

/// Lower bound on r for the cylindrical charts.
inline constexpr double kDefaultRMin = 0.05;

/// cartesian (t,x,y,z), cylindrical (t,r,theta,z), lightlike (u,v,y,z) and
/// lightlike_cylindrical (u,v,r,theta).
const std::vector<Chart>& builtin_charts();

/// Throws std::out_of_range for an unknown name.
const Chart& builtin_chart(std::string_view name);

/// Base metric components expanded as jets at `point`.
MetricJet base_metric(const Chart& chart, const Point& point, const ParamBinding& params = {});

/// Whether `point` passes the chart's admissibility expression.
bool is_admissible(const Chart& chart, const Point& point, const ParamBinding& params = {});

/// True when every metric component is a constant equal to diag(1,-1,-1,-1).
bool is_minkowski(const Chart& chart, const ParamBinding& params = {});

/// Convenience: wave_operator(u, base_metric(chart, point, params)).
Jet wave_operator(const Jet& u, const Chart& chart, const Point& point,
                  const ParamBinding& params = {});

}  // namespace prepot
