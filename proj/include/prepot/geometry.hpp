#pragma once

#include <array>
#include <complex>
#include <utility>

#include "prepot/jet.hpp"

namespace prepot {

using Matrix4c = std::array<std::array<cplx, kDim>, kDim>;

/// Slot of (a, b) in packed symmetric storage (upper triangle, row major).
constexpr std::size_t sym_index(int a, int b) {
  if (a > b) std::swap(a, b);
  constexpr std::array<std::size_t, 4> row_start = {0, 4, 7, 9};
  return row_start[static_cast<std::size_t>(a)] + static_cast<std::size_t>(b - a);
}

/// Symmetric 4x4 matrix of jets; symmetry is exact by storage.
class SymmetricJet4 {
 public:
  const Jet& operator()(int a, int b) const { return entries_[sym_index(a, b)]; }
  Jet& operator()(int a, int b) { return entries_[sym_index(a, b)]; }

  Matrix4c values() const;
  int order() const;

 private:
  std::array<Jet, 10> entries_{};
};

using MetricJet = SymmetricJet4;
using SymTensor = SymmetricJet4;

/// Constant metric with the given diagonal.
MetricJet diagonal_metric(const std::array<double, kDim>& diag);

/// Determinant as a jet (Leibniz expansion).
Jet metric_determinant(const MetricJet& g);

/// Jet-valued inverse by Gauss-Jordan elimination over the jet ring with
/// partial pivoting on the value part. Throws DomainError if the value part
/// is singular.
MetricJet metric_inverse(const MetricJet& g);

/// Covariant d'Alembertian of the base metric,
///   (1/sqrt|g|) d_a (sqrt|g| g^{ab} d_b u).
/// Needs u.order() >= 2; the result has two fewer derivative levels.
Jet wave_operator(const Jet& u, const MetricJet& base);

/// Christoffel symbols of the second kind, symmetric in the lower pair.
class Connection {
 public:
  const Jet& operator()(int rho, int mu, int nu) const { return gamma_[slot(rho, mu, nu)]; }
  Jet& operator()(int rho, int mu, int nu) { return gamma_[slot(rho, mu, nu)]; }

 private:
  static std::size_t slot(int rho, int mu, int nu) {
    return 10 * static_cast<std::size_t>(rho) + sym_index(mu, nu);
  }
  std::array<Jet, 40> gamma_{};
};

/// Gamma^r_{mn} = 1/2 g^{rl} (d_m g_{ln} + d_n g_{lm} - d_l g_{mn}).
Connection christoffel(const MetricJet& g);

/// R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}.
struct Riemann {
  std::array<Jet, 256> components{};
  /// Largest magnitude among the individual derivative and product terms
  /// that were summed, used to make curvature residuals dimensionless.
  double term_scale = 0.0;

  const Jet& operator()(int r, int s, int m, int n) const {
    return components[static_cast<std::size_t>(((r * 4 + s) * 4 + m) * 4 + n)];
  }
  Jet& operator()(int r, int s, int m, int n) {
    return components[static_cast<std::size_t>(((r * 4 + s) * 4 + m) * 4 + n)];
  }
  /// max |R^r_{smn}| over all components (value part).
  double max_abs() const;
};

Riemann riemann(const Connection& gamma);

/// R_{sn} = R^r_{srn} (value parts).
Matrix4c ricci(const Riemann& r);

}  // namespace prepot
