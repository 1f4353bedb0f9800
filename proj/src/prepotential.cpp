#include "prepot/prepotential.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

namespace prepot {
namespace {

class ScaleTracker {
 public:
  cplx operator()(cplx term) {
    value_ = std::max(value_, std::abs(term));
    return term;
  }
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

std::array<cplx, kDim> gradient(const Jet& u) {
  std::array<cplx, kDim> g{};
  for (int a = 0; a < kDim; ++a) g[a] = u.d(a);
  return g;
}

std::array<cplx, kDim> raise(const Matrix4c& ginv, const std::array<cplx, kDim>& v) {
  std::array<cplx, kDim> out{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) out[a] += ginv[a][b] * v[b];
  return out;
}

// Hessian transport u^{,a}_{,b} w^{,b} for one ordering of the pair.
void hessian_transport(const Matrix4c& ginv, const Jet& u, const Jet& w, ResidualSet& out,
                       ScaleTracker& scale) {
  const auto w_up = raise(ginv, gradient(w));
  for (int a = 0; a < kDim; ++a) {
    cplx sum{};
    for (int c = 0; c < kDim; ++c) {
      if (ginv[a][c] == cplx{}) continue;
      for (int b = 0; b < kDim; ++b) sum += scale(ginv[a][c] * u.d(c, b) * w_up[b]);
    }
    out.components.push_back(sum);
  }
}

// v^a = g^{ab} u_{,b} as jets; one derivative level is consumed.
std::array<Jet, kDim> gradient_field(const PointContext& ctx, const Jet& u) {
  const MetricJet& ginv = ctx.base_inverse();
  std::array<Jet, kDim> v;
  for (int a = 0; a < kDim; ++a) {
    Jet sum = Jet::constant(0.0);
    for (int b = 0; b < kDim; ++b) sum += ginv(a, b) * u.diff(b);
    v[a] = sum;
  }
  return v;
}

}  // namespace

double ResidualSet::max_abs() const {
  double m = 0.0;
  for (const cplx& c : components) m = std::max(m, std::abs(c));
  return m;
}

bool ResidualSet::anomalous() const {
  if (!std::isfinite(scale)) return true;
  return std::any_of(components.begin(), components.end(), [](cplx c) {
    return !std::isfinite(c.real()) || !std::isfinite(c.imag());
  });
}

double relative_residual(double abs, double scale, const Tolerances& tol) {
  return scale > tol.scale_floor ? abs / scale : abs;
}

ConditionResult assess(std::string name, const ResidualSet& r, double tolerance,
                       const Tolerances& tol) {
  ConditionResult out;
  out.name = std::move(name);
  out.max_abs = r.max_abs();
  out.scale = r.scale;
  out.max_rel = relative_residual(out.max_abs, r.scale, tol);
  if (r.anomalous()) {
    out.max_abs = out.max_rel = std::numeric_limits<double>::quiet_NaN();
    out.pass = false;
  } else if (r.scale > tol.scale_floor) {
    out.pass = out.max_rel <= tolerance;
  } else {
    out.pass = out.max_abs <= tol.absolute;
  }
  return out;
}

ConditionResult assess_lower(std::string name, double abs, double scale, double floor) {
  ConditionResult out;
  out.name = std::move(name);
  out.max_abs = abs;
  out.scale = scale;
  out.max_rel = scale > 0.0 ? abs / scale : 0.0;
  out.pass = std::isfinite(out.max_rel) && out.max_rel > floor;
  return out;
}

PointContext::PointContext(const Chart& chart, const Point& point, const ParamBinding& params)
    : chart_(chart), point_(point), params_(params) {}

const MetricJet& PointContext::base() const {
  if (!base_) base_ = base_metric(chart_, point_, params_);
  return *base_;
}

const MetricJet& PointContext::base_inverse() const {
  if (!base_inverse_) base_inverse_ = metric_inverse(base());
  return *base_inverse_;
}

const Connection& PointContext::base_connection() const {
  if (!base_connection_) base_connection_ = christoffel(base());
  return *base_connection_;
}

const Matrix4c& PointContext::inverse_values() const {
  if (!inverse_values_) inverse_values_ = base_inverse().values();
  return *inverse_values_;
}

const Jet& PointContext::jet(const Prepotential& u) const {
  auto it = jets_.find(u.expr.id());
  if (it == jets_.end()) it = jets_.emplace(u.expr.id(), std::pair{u.expr, eval(u.expr)}).first;
  return it->second.second;
}

ResidualSet wave_residual(const PointContext& ctx, const Jet& u) {
  const Matrix4c& ginv = ctx.inverse_values();
  const Connection& gamma = ctx.base_connection();
  const auto grad = gradient(u);
  ScaleTracker scale;
  cplx sum{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      if (ginv[a][b] == cplx{}) continue;
      sum += scale(ginv[a][b] * u.d(a, b));
      for (int l = 0; l < kDim; ++l) {
        const cplx g = gamma(l, a, b).value();
        if (g != cplx{}) sum -= scale(ginv[a][b] * g * grad[l]);
      }
    }
  return {{sum}, scale.value()};
}

ConditionResult check_dalembert(const PointContext& ctx, const Prepotential& u,
                                const Tolerances& tol) {
  return assess("dalembert:" + u.name, wave_residual(ctx, ctx.jet(u)), tol.relative, tol);
}

ConditionResult check_gradient_orthogonality(const PointContext& ctx, const PrepotentialPair& p,
                                             const Tolerances& tol) {
  const Matrix4c& ginv = ctx.inverse_values();
  const auto du = gradient(ctx.jet(p.first));
  const auto dv = gradient(ctx.jet(p.second));
  ScaleTracker scale;
  cplx sum{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      if (ginv[a][b] != cplx{}) sum += scale(ginv[a][b] * du[a] * dv[b]);
    }
  return assess("gradient_orthogonality:" + p.first.name + "," + p.second.name,
                {{sum}, scale.value()}, tol.relative, tol);
}

ConditionResult check_hessian_conditions(const PointContext& ctx, const PrepotentialPair& p,
                                         const Tolerances& tol) {
  const Matrix4c& ginv = ctx.inverse_values();
  const Jet& u = ctx.jet(p.first);
  const Jet& v = ctx.jet(p.second);
  ResidualSet r;
  ScaleTracker scale;
  hessian_transport(ginv, u, v, r, scale);
  hessian_transport(ginv, v, u, r, scale);
  r.scale = scale.value();
  return assess("hessian:" + p.first.name + "," + p.second.name, r, tol.relative, tol);
}

ConditionResult check_commutation(const PointContext& ctx, const PrepotentialPair& p,
                                  const Tolerances& tol) {
  const auto v1 = gradient_field(ctx, ctx.jet(p.first));
  const auto v2 = gradient_field(ctx, ctx.jet(p.second));
  ResidualSet r;
  ScaleTracker scale;
  for (int a = 0; a < kDim; ++a) {
    cplx sum{};
    for (int b = 0; b < kDim; ++b) {
      sum += scale(v2[b].value() * v1[a].d(b));
      sum -= scale(v1[b].value() * v2[a].d(b));
    }
    r.components.push_back(sum);
  }
  r.scale = scale.value();
  return assess("commutation:" + p.first.name + "," + p.second.name, r, tol.relative, tol);
}

cplx determinant(const Matrix4c& m) {
  std::array<int, kDim> perm = {0, 1, 2, 3};
  cplx det{};
  do {
    int inversions = 0;
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    cplx term = inversions % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < kDim; ++i) term *= m[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

ConditionResult check_independence(const PointContext& ctx, std::span<const Prepotential, 4> us,
                                   const Tolerances& tol) {
  Matrix4c jac{};
  double norms = 1.0;
  std::string name = "independence:";
  for (int a = 0; a < kDim; ++a) {
    const Jet& u = ctx.jet(us[a]);
    double row = 0.0;
    for (int b = 0; b < kDim; ++b) {
      jac[a][b] = u.d(b);
      row += std::norm(jac[a][b]);
    }
    norms *= std::sqrt(row);
    name += (a ? "," : "") + us[a].name;
  }
  return assess_lower(std::move(name), std::abs(determinant(jac)), norms, tol.independence_floor);
}

ConditionResult check_disjoint_supports(const PrepotentialPair& p) {
  const auto a = free_coordinates(p.first.expr);
  const auto b = free_coordinates(p.second.expr);
  std::vector<std::string> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  ConditionResult out;
  out.name = "disjoint_supports:" + p.first.name + "," + p.second.name;
  out.max_abs = static_cast<double>(shared.size());
  out.scale = 1.0;
  out.max_rel = out.max_abs;
  out.pass = !a.empty() && !b.empty() && shared.empty();
  return out;
}

}  // namespace prepot
