#pragma once

#include <array>
#include <optional>
#include <span>

#include "prepot/clifford.hpp"
#include "prepot/prepotential.hpp"

namespace prepot {

/// Antisymmetric 4x4 tensor of jets; only a < b is stored.
class FieldStrength {
 public:
  Jet operator()(int a, int b) const;
  /// Stored component for a < b.
  Jet& upper(int a, int b);
  const Jet& upper(int a, int b) const;

  Matrix4c values() const;

 private:
  static std::size_t slot(int a, int b);
  std::array<Jet, 6> entries_{};
};

/// Covector A_a.
using Potential = std::array<Jet, kDim>;

/// F_ab = sum over pairs of (u_a v_b - u_b v_a).
FieldStrength build_F(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

/// d_b (g^{am} g^{bn} F_mn); one component per a.
ResidualSet maxwell_divergence_residual(const FieldStrength& f, const PointContext& ctx);

/// Cyclic sums d_c F_ab + d_b F_ca + d_a F_bc over the four index triples,
/// scaled by the individual second-derivative products.
ResidualSet bianchi_residual(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

/// A_a = 1/2 sum (u_a v - v_a u) + d_a gauge.
Potential vector_potential(const PointContext& ctx, std::span<const PrepotentialPair> pairs,
                           const std::optional<Expr>& gauge = std::nullopt);

/// Curl oriented to match build_F: F_ab = d_b A_a - d_a A_b.
FieldStrength field_from_potential(const Potential& a);

/// Coefficient-wise difference between build_F and the curl of the potential.
ResidualSet potential_consistency(const PointContext& ctx, std::span<const PrepotentialPair> pairs,
                                  const std::optional<Expr>& gauge = std::nullopt);

/// det of the value part of F.
cplx f_regularity(const FieldStrength& f);

/// Lower-bound check of |det F| against the product of its row norms.
ConditionResult regularity_check(const FieldStrength& f, const Tolerances& tol = {});

/// phi = sum over pairs of u v.
Jet build_scalar(const PointContext& ctx, std::span<const PrepotentialPair> pairs);
ResidualSet kg_residual(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

/// psi = gamma^mu d_mu (u1 v1, u2 v2, u3 v3, u4 v4). Cartesian only.
Spinor build_dirac_from_products(const PointContext& ctx,
                                 std::span<const PrepotentialPair, 4> column);

/// The four explicit bilinear component formulas in first derivatives,
/// summed over pairs. Cartesian only.
Spinor build_dirac_from_maxwell(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

/// i gamma^mu d_mu psi (value parts).
ResidualSet dirac_residual(const Spinor& psi);

/// psi_b = d_b(slash d u) slash d (c1, c2, c3, c4). Cartesian only.
VectorSpinor build_rs(const PointContext& ctx, const Prepotential& u,
                      std::span<const Prepotential, 4> column);

struct RsResiduals {
  ResidualSet dynamical;    // i slash d psi_b, all b
  ResidualSet gamma_trace;  // gamma^b psi_b
  ResidualSet divergence;   // eta^{bn} d_n psi_b
};

RsResiduals rs_residuals(const VectorSpinor& psi);

/// h_ab = sum over pairs of (U_a V_b + V_a U_b).
SymTensor build_h(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

/// All ten components of h_m^a_{,na} + h_n^a_{,ma} - h_{mn,a}^a - h_{,mn}.
/// Cartesian only.
ResidualSet linearized_einstein_residual(const PointContext& ctx, const SymTensor& h);
/// eta^{ab} h_ab.
ResidualSet h_trace(const PointContext& ctx, const SymTensor& h);
/// h_m^a_{,a}.
ResidualSet h_divergence(const PointContext& ctx, const SymTensor& h);

/// g = base + h(pairs), keeping two derivative levels.
MetricJet build_full_metric(const PointContext& ctx, std::span<const PrepotentialPair> pairs);

struct EinsteinEvaluation {
  /// Ricci components, scaled by the largest Riemann term.
  ResidualSet ricci;
  /// max |R^r_smn| and the Riemann term scale.
  double certificate = 0.0;
  double term_scale = 0.0;
};

/// Ricci residual and Riemann certificate of a full metric. Throws
/// DomainError when the metric value is singular.
EinsteinEvaluation einstein_vacuum(const MetricJet& g);

/// max |R^r_smn| of g.
double riemann_certificate(const MetricJet& g);

}  // namespace prepot
