#include "prepot/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "prepot/error.hpp"

namespace prepot {

Matrix4c SymmetricJet4::values() const {
  Matrix4c out{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) out[a][b] = (*this)(a, b).value();
  return out;
}

int SymmetricJet4::order() const {
  int o = kJetOrder;
  for (const auto& e : entries_) o = std::min(o, e.order());
  return o;
}

MetricJet diagonal_metric(const std::array<double, kDim>& diag) {
  MetricJet g;
  for (int a = 0; a < kDim; ++a) g(a, a) = Jet::constant(diag[a]);
  return g;
}

Jet metric_determinant(const MetricJet& g) {
  // Sum over the 24 permutations of {0,1,2,3} with their signs.
  std::array<int, 4> perm = {0, 1, 2, 3};
  Jet det = Jet::constant(0.0).truncated(g.order());
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    Jet term = g(0, perm[0]) * g(1, perm[1]) * g(2, perm[2]) * g(3, perm[3]);
    if (inversions % 2 == 0) {
      det += term;
    } else {
      det -= term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

MetricJet metric_inverse(const MetricJet& g) {
  std::array<std::array<Jet, kDim>, kDim> m{};
  std::array<std::array<Jet, kDim>, kDim> inv{};
  double largest = 0.0;
  for (int a = 0; a < kDim; ++a) {
    for (int b = 0; b < kDim; ++b) {
      m[a][b] = g(a, b);
      inv[a][b] = Jet::constant(a == b ? 1.0 : 0.0).truncated(g.order());
      largest = std::max(largest, std::abs(m[a][b].value()));
    }
  }
  if (largest == 0.0) throw DomainError("metric value part is zero");

  for (int col = 0; col < kDim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < kDim; ++r) {
      if (std::abs(m[r][col].value()) > std::abs(m[pivot][col].value())) pivot = r;
    }
    if (std::abs(m[pivot][col].value()) <= 1e-14 * largest) {
      throw DomainError("metric value part is singular");
    }
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);

    const Jet scale = recip(m[col][col]);
    for (int c = 0; c < kDim; ++c) {
      m[col][c] = m[col][c] * scale;
      inv[col][c] = inv[col][c] * scale;
    }
    for (int r = 0; r < kDim; ++r) {
      if (r == col) continue;
      const Jet factor = m[r][col];
      if (factor == Jet::constant(0.0).truncated(factor.order())) continue;
      for (int c = 0; c < kDim; ++c) {
        m[r][c] -= factor * m[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }

  MetricJet out;
  for (int a = 0; a < kDim; ++a) {
    out(a, a) = inv[a][a];
    for (int b = a + 1; b < kDim; ++b) out(a, b) = (inv[a][b] + inv[b][a]) * 0.5;
  }
  return out;
}

Jet wave_operator(const Jet& u, const MetricJet& base) {
  if (u.order() < 2) throw std::logic_error("wave operator needs a jet of order >= 2");
  const MetricJet inv = metric_inverse(base);
  const Jet det = metric_determinant(base);
  const double sign = det.value().real() < 0.0 ? -1.0 : 1.0;
  const Jet root = sqrt(det * sign);

  std::array<Jet, kDim> du;
  for (int b = 0; b < kDim; ++b) du[b] = u.diff(b);

  Jet divergence = Jet::constant(0.0).truncated(u.order() - 2);
  for (int a = 0; a < kDim; ++a) {
    Jet flux = Jet::constant(0.0);
    for (int b = 0; b < kDim; ++b) flux += inv(a, b) * du[b];
    divergence += (root * flux).diff(a);
  }
  return divergence * recip(root);
}

Connection christoffel(const MetricJet& g) {
  const MetricJet inv = metric_inverse(g);
  // dg[c] holds d_c g_{ab}.
  std::array<SymmetricJet4, kDim> dg;
  for (int c = 0; c < kDim; ++c)
    for (int a = 0; a < kDim; ++a)
      for (int b = a; b < kDim; ++b) dg[c](a, b) = g(a, b).diff(c);

  Connection gamma;
  for (int rho = 0; rho < kDim; ++rho) {
    for (int mu = 0; mu < kDim; ++mu) {
      for (int nu = mu; nu < kDim; ++nu) {
        Jet sum = Jet::constant(0.0);
        for (int lam = 0; lam < kDim; ++lam) {
          sum += inv(rho, lam) * (dg[mu](lam, nu) + dg[nu](lam, mu) - dg[lam](mu, nu));
        }
        gamma(rho, mu, nu) = sum * 0.5;
      }
    }
  }
  return gamma;
}

double Riemann::max_abs() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, std::abs(c.value()));
  return m;
}

Riemann riemann(const Connection& gamma) {
  // dG[k][r][a][b] = d_k Gamma^r_{ab}
  std::array<std::array<std::array<std::array<Jet, kDim>, kDim>, kDim>, kDim> dgamma;
  for (int k = 0; k < kDim; ++k)
    for (int r = 0; r < kDim; ++r)
      for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) dgamma[k][r][a][b] = gamma(r, a, b).diff(k);

  Riemann out;
  double scale = 0.0;
  for (int r = 0; r < kDim; ++r) {
    for (int s = 0; s < kDim; ++s) {
      for (int m = 0; m < kDim; ++m) {
        for (int n = 0; n < kDim; ++n) {
          const Jet& d_first = dgamma[m][r][n][s];
          const Jet& d_second = dgamma[n][r][m][s];
          Jet quad_first = Jet::constant(0.0);
          Jet quad_second = Jet::constant(0.0);
          for (int l = 0; l < kDim; ++l) {
            const Jet p = gamma(r, m, l) * gamma(l, n, s);
            const Jet q = gamma(r, n, l) * gamma(l, m, s);
            scale = std::max({scale, std::abs(p.value()), std::abs(q.value())});
            quad_first += p;
            quad_second += q;
          }
          scale = std::max({scale, std::abs(d_first.value()), std::abs(d_second.value())});
          // Grouped so that swapping (m, n) negates every coefficient exactly.
          out(r, s, m, n) = (d_first - d_second) + (quad_first - quad_second);
        }
      }
    }
  }
  out.term_scale = scale;
  return out;
}

Matrix4c ricci(const Riemann& r) {
  Matrix4c out{};
  for (int s = 0; s < kDim; ++s)
    for (int n = 0; n < kDim; ++n) {
      cplx sum{};
      for (int rho = 0; rho < kDim; ++rho) sum += r(rho, s, rho, n).value();
      out[s][n] = sum;
    }
  return out;
}

}  // namespace prepot
