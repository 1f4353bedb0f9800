#include "prepot/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace prepot {
namespace {

constexpr cplx kI{0.0, 1.0};

class ScaleTracker {
 public:
  cplx operator()(cplx term) {
    value_ = std::max(value_, std::abs(term));
    return term;
  }
  void add_jet(const Jet& j) {
    for (const cplx& c : j.coefficients()) value_ = std::max(value_, std::abs(c));
  }
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

bool is_zero(const Jet& j) {
  const auto c = j.coefficients();
  return std::all_of(c.begin(), c.end(), [](cplx x) { return x == cplx{}; });
}

void require_cartesian(const PointContext& ctx, const char* what) {
  if (!is_minkowski(ctx.chart(), ctx.params()))
    throw std::invalid_argument(std::string(what) + " requires a constant diag(1,-1,-1,-1) metric; chart '" +
                                ctx.chart().name + "' is not");
}

std::array<Jet, kDim> gradient_jets(const Jet& u) {
  std::array<Jet, kDim> g;
  for (int a = 0; a < kDim; ++a) g[a] = u.diff(a);
  return g;
}

int min_order(const Spinor& s) {
  int order = kJetOrder;
  for (const auto& e : s) order = std::min(order, e.order());
  return order;
}

// i gamma^mu d_mu s with the per-term scale.
void dirac_terms(const Spinor& s, ResidualSet& out, ScaleTracker& scale) {
  const auto& g = gamma_matrices();
  for (int r = 0; r < 4; ++r) {
    cplx sum{};
    for (int mu = 0; mu < kDim; ++mu)
      for (int c = 0; c < 4; ++c) {
        if (g[mu][r][c] != cplx{}) sum += scale(kI * g[mu][r][c] * s[c].d(mu));
      }
    out.components.push_back(sum);
  }
}

}  // namespace

std::size_t FieldStrength::slot(int a, int b) {
  // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
  return static_cast<std::size_t>(a == 0 ? b - 1 : a == 1 ? b + 1 : 5);
}

Jet FieldStrength::operator()(int a, int b) const {
  if (a == b) return Jet::constant(0.0);
  return a < b ? entries_[slot(a, b)] : -entries_[slot(b, a)];
}

Jet& FieldStrength::upper(int a, int b) {
  if (a >= b) throw std::out_of_range("FieldStrength::upper needs a < b");
  return entries_[slot(a, b)];
}

const Jet& FieldStrength::upper(int a, int b) const {
  if (a >= b) throw std::out_of_range("FieldStrength::upper needs a < b");
  return entries_[slot(a, b)];
}

Matrix4c FieldStrength::values() const {
  Matrix4c m{};
  for (int a = 0; a < kDim; ++a)
    for (int b = a + 1; b < kDim; ++b) {
      m[a][b] = entries_[slot(a, b)].value();
      m[b][a] = -m[a][b];
    }
  return m;
}

FieldStrength build_F(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  FieldStrength f;
  for (int a = 0; a < kDim; ++a)
    for (int b = a + 1; b < kDim; ++b) f.upper(a, b) = Jet::constant(0.0);
  for (const auto& p : pairs) {
    const auto du = gradient_jets(ctx.jet(p.first));
    const auto dv = gradient_jets(ctx.jet(p.second));
    for (int a = 0; a < kDim; ++a)
      for (int b = a + 1; b < kDim; ++b) f.upper(a, b) += du[a] * dv[b] - du[b] * dv[a];
  }
  return f;
}

ResidualSet maxwell_divergence_residual(const FieldStrength& f, const PointContext& ctx) {
  const MetricJet& ginv = ctx.base_inverse();
  ResidualSet r;
  ScaleTracker scale;
  for (int a = 0; a < kDim; ++a) {
    cplx sum{};
    for (int b = 0; b < kDim; ++b)
      for (int m = 0; m < kDim; ++m) {
        if (is_zero(ginv(a, m))) continue;
        for (int n = 0; n < kDim; ++n) {
          if (m == n || is_zero(ginv(b, n))) continue;
          sum += scale((ginv(a, m) * ginv(b, n) * f(m, n)).d(b));
        }
      }
    r.components.push_back(sum);
  }
  r.scale = scale.value();
  return r;
}

ResidualSet bianchi_residual(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  const FieldStrength f = build_F(ctx, pairs);
  ResidualSet r;
  ScaleTracker scale;
  for (int a = 0; a < kDim; ++a)
    for (int b = a + 1; b < kDim; ++b)
      for (int c = b + 1; c < kDim; ++c) {
        r.components.push_back(f(a, b).d(c) + f(b, c).d(a) + f(c, a).d(b));
        const std::array<std::array<int, 3>, 3> cyclic = {{{a, b, c}, {b, c, a}, {c, a, b}}};
        for (const auto& p : pairs) {
          const Jet& u = ctx.jet(p.first);
          const Jet& v = ctx.jet(p.second);
          for (const auto& [x, y, z] : cyclic) {
            scale(u.d(x, z) * v.d(y));
            scale(u.d(x) * v.d(y, z));
            scale(u.d(y, z) * v.d(x));
            scale(u.d(y) * v.d(x, z));
          }
        }
      }
  r.scale = scale.value();
  return r;
}

Potential vector_potential(const PointContext& ctx, std::span<const PrepotentialPair> pairs,
                           const std::optional<Expr>& gauge) {
  Potential a;
  for (auto& e : a) e = Jet::constant(0.0);
  for (const auto& p : pairs) {
    const Jet& u = ctx.jet(p.first);
    const Jet& v = ctx.jet(p.second);
    for (int k = 0; k < kDim; ++k) a[k] += 0.5 * (u.diff(k) * v - v.diff(k) * u);
  }
  if (gauge) {
    const Jet lambda = ctx.eval(*gauge);
    for (int k = 0; k < kDim; ++k) a[k] += lambda.diff(k);
  }
  return a;
}

FieldStrength field_from_potential(const Potential& a) {
  FieldStrength f;
  for (int m = 0; m < kDim; ++m)
    for (int n = m + 1; n < kDim; ++n) f.upper(m, n) = a[m].diff(n) - a[n].diff(m);
  return f;
}

ResidualSet potential_consistency(const PointContext& ctx, std::span<const PrepotentialPair> pairs,
                                  const std::optional<Expr>& gauge) {
  const Potential a = vector_potential(ctx, pairs, gauge);
  const FieldStrength curl = field_from_potential(a);
  const FieldStrength direct = build_F(ctx, pairs);
  ResidualSet r;
  ScaleTracker scale;
  for (int m = 0; m < kDim; ++m)
    for (int n = m + 1; n < kDim; ++n) {
      const Jet& c = curl.upper(m, n);
      const Jet d = direct.upper(m, n).truncated(c.order());
      scale.add_jet(a[m].diff(n));
      scale.add_jet(a[n].diff(m));
      scale.add_jet(d);
      for (std::size_t s = 0; s < kJetSize; ++s) r.components.push_back(c.coefficient(s) - d.coefficient(s));
    }
  r.scale = scale.value();
  return r;
}

cplx f_regularity(const FieldStrength& f) { return determinant(f.values()); }

ConditionResult regularity_check(const FieldStrength& f, const Tolerances& tol) {
  const Matrix4c m = f.values();
  double norms = 1.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (const cplx& x : row) s += std::norm(x);
    norms *= std::sqrt(s);
  }
  return assess_lower("regularity", std::abs(determinant(m)), norms, tol.independence_floor);
}

Jet build_scalar(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  Jet phi = Jet::constant(0.0);
  for (const auto& p : pairs) phi += ctx.jet(p.first) * ctx.jet(p.second);
  return phi;
}

ResidualSet kg_residual(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  return wave_residual(ctx, build_scalar(ctx, pairs));
}

Spinor build_dirac_from_products(const PointContext& ctx,
                                 std::span<const PrepotentialPair, 4> column) {
  require_cartesian(ctx, "dirac_products");
  Spinor phi;
  for (int k = 0; k < 4; ++k) phi[k] = ctx.jet(column[k].first) * ctx.jet(column[k].second);
  return slash_derivative(phi);
}

Spinor build_dirac_from_maxwell(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  require_cartesian(ctx, "dirac_maxwell");
  Spinor psi;
  for (auto& e : psi) e = Jet::constant(0.0);
  for (const auto& p : pairs) {
    const auto a = gradient_jets(ctx.jet(p.first));
    const auto b = gradient_jets(ctx.jet(p.second));
    // w(j, k) = u_j v_k - v_j u_k
    auto w = [&](int j, int k) { return a[j] * b[k] - b[j] * a[k]; };
    psi[0] -= w(0, 3);
    psi[1] -= w(0, 1) + kI * w(0, 2);
    psi[2] += kI * w(1, 2);
    psi[3] += w(1, 3) + kI * w(2, 3);
  }
  return psi;
}

ResidualSet dirac_residual(const Spinor& psi) {
  ResidualSet r;
  ScaleTracker scale;
  dirac_terms(psi, r, scale);
  r.scale = scale.value();
  return r;
}

VectorSpinor build_rs(const PointContext& ctx, const Prepotential& u,
                      std::span<const Prepotential, 4> column) {
  require_cartesian(ctx, "rarita_schwinger");
  Spinor col;
  for (int k = 0; k < 4; ++k) col[k] = ctx.jet(column[k]);
  const Spinor chi = slash_derivative(col);
  const auto du = gradient_jets(ctx.jet(u));
  VectorSpinor psi;
  for (int beta = 0; beta < kDim; ++beta) {
    std::array<Jet, kDim> hess;
    for (int mu = 0; mu < kDim; ++mu) hess[mu] = du[mu].diff(beta);
    psi[beta] = apply_matrix(slash(hess), chi);
  }
  return psi;
}

RsResiduals rs_residuals(const VectorSpinor& psi) {
  constexpr std::array<double, kDim> eta = {1.0, -1.0, -1.0, -1.0};
  const auto& g = gamma_matrices();
  for (const Spinor& s : psi) {
    if (min_order(s) < 1) throw std::invalid_argument("rs_residuals needs one derivative level");
  }
  RsResiduals out;

  ScaleTracker dyn;
  for (const Spinor& s : psi) dirac_terms(s, out.dynamical, dyn);
  out.dynamical.scale = dyn.value();

  ScaleTracker trace;
  for (int r = 0; r < 4; ++r) {
    cplx sum{};
    for (int beta = 0; beta < kDim; ++beta)
      for (int c = 0; c < 4; ++c) {
        if (g[beta][r][c] != cplx{}) sum += trace(g[beta][r][c] * psi[beta][c].value());
      }
    out.gamma_trace.components.push_back(sum);
  }
  out.gamma_trace.scale = trace.value();

  ScaleTracker div;
  for (int r = 0; r < 4; ++r) {
    cplx sum{};
    for (int beta = 0; beta < kDim; ++beta) sum += div(eta[beta] * psi[beta][r].d(beta));
    out.divergence.components.push_back(sum);
  }
  out.divergence.scale = div.value();
  return out;
}

SymTensor build_h(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  SymTensor h;
  for (int a = 0; a < kDim; ++a)
    for (int b = a; b < kDim; ++b) h(a, b) = Jet::constant(0.0);
  for (const auto& p : pairs) {
    const auto du = gradient_jets(ctx.jet(p.first));
    const auto dv = gradient_jets(ctx.jet(p.second));
    for (int a = 0; a < kDim; ++a)
      for (int b = a; b < kDim; ++b) h(a, b) += du[a] * dv[b] + dv[a] * du[b];
  }
  return h;
}

ResidualSet linearized_einstein_residual(const PointContext& ctx, const SymTensor& h) {
  require_cartesian(ctx, "linearized_einstein");
  const Matrix4c& eta = ctx.inverse_values();
  ResidualSet r;
  ScaleTracker scale;
  for (int m = 0; m < kDim; ++m)
    for (int n = m; n < kDim; ++n) {
      cplx sum{};
      for (int a = 0; a < kDim; ++a) {
        const cplx e = eta[a][a];
        sum += scale(e * h(m, a).d(n, a));
        sum += scale(e * h(n, a).d(m, a));
        sum -= scale(e * h(m, n).d(a, a));
        sum -= scale(e * h(a, a).d(m, n));
      }
      r.components.push_back(sum);
    }
  r.scale = scale.value();
  return r;
}

ResidualSet h_trace(const PointContext& ctx, const SymTensor& h) {
  const Matrix4c& ginv = ctx.inverse_values();
  ScaleTracker scale;
  cplx sum{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      if (ginv[a][b] != cplx{}) sum += scale(ginv[a][b] * h(a, b).value());
    }
  return {{sum}, scale.value()};
}

ResidualSet h_divergence(const PointContext& ctx, const SymTensor& h) {
  const Matrix4c& ginv = ctx.inverse_values();
  ResidualSet r;
  ScaleTracker scale;
  for (int m = 0; m < kDim; ++m) {
    cplx sum{};
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b) {
        if (ginv[a][b] != cplx{}) sum += scale(ginv[a][b] * h(m, b).d(a));
      }
    r.components.push_back(sum);
  }
  r.scale = scale.value();
  return r;
}

MetricJet build_full_metric(const PointContext& ctx, std::span<const PrepotentialPair> pairs) {
  const SymTensor theta = build_h(ctx, pairs);
  const MetricJet& base = ctx.base();
  MetricJet g;
  const int order = pairs.empty() ? 2 : theta.order();
  for (int a = 0; a < kDim; ++a)
    for (int b = a; b < kDim; ++b) g(a, b) = (base(a, b) + theta(a, b)).truncated(std::min(order, 2));
  return g;
}

EinsteinEvaluation einstein_vacuum(const MetricJet& g) {
  const Riemann rm = riemann(christoffel(g));
  const Matrix4c rc = ricci(rm);
  EinsteinEvaluation out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) out.ricci.components.push_back(rc[a][b]);
  out.ricci.scale = rm.term_scale;
  out.certificate = rm.max_abs();
  out.term_scale = rm.term_scale;
  return out;
}

double riemann_certificate(const MetricJet& g) { return riemann(christoffel(g)).max_abs(); }

}  // namespace prepot
