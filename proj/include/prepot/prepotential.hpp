#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>
#include <utility>

#include "prepot/chart.hpp"
#include "prepot/expr.hpp"
#include "prepot/geometry.hpp"

namespace prepot {

struct Prepotential {
  std::string name;
  Expr expr;
};

struct PrepotentialPair {
  Prepotential first;
  Prepotential second;
};

/// Thresholds shared by every check. Residuals are made dimensionless by the
/// largest individual term entering the sum; below `scale_floor` the
/// absolute tolerance applies instead.
struct Tolerances {
  double relative = 1e-9;
  double einstein = 1e-8;
  double nonflat_floor = 1e-6;
  double independence_floor = 1e-8;
  double exact = 8.0 * std::numeric_limits<double>::epsilon();
  double scale_floor = 1e-30;
  double absolute = 1e-12;
};

/// Raw residual components at one point plus the magnitude of the terms
/// that were summed to produce them.
struct ResidualSet {
  std::vector<cplx> components;
  double scale = 0.0;

  double max_abs() const;
  /// Non-finite components or scale.
  bool anomalous() const;
};

/// Outcome of one check at one point. For upper-bound checks `pass` means
/// max_rel <= tolerance; for lower-bound checks (independence, regularity,
/// non-flatness) it means max_rel exceeds the floor.
struct ConditionResult {
  std::string name;
  double max_abs = 0.0;
  double scale = 0.0;
  double max_rel = 0.0;
  bool pass = false;
};

/// abs / scale, or abs itself when scale is under the floor.
double relative_residual(double abs, double scale, const Tolerances& tol);

/// Upper-bound verdict for a residual set against `tolerance`.
ConditionResult assess(std::string name, const ResidualSet& r, double tolerance,
                       const Tolerances& tol);

/// Lower-bound verdict: pass when abs / scale > floor.
ConditionResult assess_lower(std::string name, double abs, double scale, double floor);

/// Per-point evaluation state: chart, point, parameters and lazily built
/// base-metric quantities and pre-potential jets. Not shared across threads.
class PointContext {
 public:
  PointContext(const Chart& chart, const Point& point, const ParamBinding& params);

  const Chart& chart() const { return chart_; }
  const Point& point() const { return point_; }
  const ParamBinding& params() const { return params_; }

  const MetricJet& base() const;
  const MetricJet& base_inverse() const;
  const Connection& base_connection() const;
  /// Raised-index base metric values g^{ab}.
  const Matrix4c& inverse_values() const;

  /// Jet of a pre-potential, memoised per expression.
  const Jet& jet(const Prepotential& u) const;
  Jet eval(const Expr& e) const { return eval_jet(e, point_, params_); }

 private:
  const Chart& chart_;
  Point point_;
  const ParamBinding& params_;
  mutable std::optional<MetricJet> base_;
  mutable std::optional<MetricJet> base_inverse_;
  mutable std::optional<Connection> base_connection_;
  mutable std::optional<Matrix4c> inverse_values_;
  /// Keyed by tree identity; the stored Expr keeps the tree, and so the key, alive.
  mutable std::map<const void*, std::pair<Expr, Jet>> jets_;
};

/// Box u = 0 residual with the individual second-derivative and connection
/// terms of g^{ab}(d_a d_b u - Gamma^l_{ab} d_l u) as scale.
ResidualSet wave_residual(const PointContext& ctx, const Jet& u);

ConditionResult check_dalembert(const PointContext& ctx, const Prepotential& u,
                                const Tolerances& tol = {});
/// g^{ab} u_a v_b = 0.
ConditionResult check_gradient_orthogonality(const PointContext& ctx, const PrepotentialPair& p,
                                             const Tolerances& tol = {});
/// u^{,a}_{,b} v^{,b} = 0 and v^{,a}_{,b} u^{,b} = 0.
ConditionResult check_hessian_conditions(const PointContext& ctx, const PrepotentialPair& p,
                                         const Tolerances& tol = {});
/// [v1, v2] = 0 for v^a = g^{ab} u_{,b}.
ConditionResult check_commutation(const PointContext& ctx, const PrepotentialPair& p,
                                  const Tolerances& tol = {});
/// |det(d u^(a) / d x^b)| > floor * product of row norms.
ConditionResult check_independence(const PointContext& ctx, std::span<const Prepotential, 4> us,
                                   const Tolerances& tol = {});
/// Coordinate supports are non-empty and disjoint.
ConditionResult check_disjoint_supports(const PrepotentialPair& p);

/// Determinant of a complex 4x4 matrix.
cplx determinant(const Matrix4c& m);

}  // namespace prepot
