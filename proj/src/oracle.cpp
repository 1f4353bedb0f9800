#include "prepot/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "prepot/error.hpp"

namespace prepot {
namespace {

// (offset in units of h, weight) for the central stencil of each order.
using Stencil = std::vector<std::pair<int, double>>;

const Stencil& stencil(int exponent) {
  static const std::array<Stencil, 4> table = {
      Stencil{{0, 1.0}},
      Stencil{{1, 0.5}, {-1, -0.5}},
      Stencil{{1, 1.0}, {0, -2.0}, {-1, 1.0}},
      Stencil{{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}},
  };
  return table.at(static_cast<std::size_t>(exponent));
}

cplx central_difference(const ScalarField& f, const Point& point, const MultiIndex& m, double h) {
  cplx sum{};
  const auto& s0 = stencil(m.exponents[0]);
  const auto& s1 = stencil(m.exponents[1]);
  const auto& s2 = stencil(m.exponents[2]);
  const auto& s3 = stencil(m.exponents[3]);
  for (const auto& [o0, w0] : s0)
    for (const auto& [o1, w1] : s1)
      for (const auto& [o2, w2] : s2)
        for (const auto& [o3, w3] : s3) {
          const Point p{point[0] + o0 * h, point[1] + o1 * h, point[2] + o2 * h,
                        point[3] + o3 * h};
          sum += (w0 * w1 * w2 * w3) * f(p);
        }
  return sum / std::pow(h, m.degree());
}

constexpr int kTableauSize = 10;
constexpr double kShrink = 1.4;
constexpr int kMaxHalvings = 20;

}  // namespace

cplx finite_difference_oracle(const ScalarField& f, const Point& point, const MultiIndex& m,
                              double h) {
  jet_slot(m);  // validates degree <= 3
  if (m.degree() == 0) return f(point);

  std::array<std::array<cplx, kTableauSize>, kTableauSize> a{};
  for (int k = 0;; ++k) {
    try {
      a[0][0] = central_difference(f, point, m, h);
      break;
    } catch (const DomainError&) {
      if (k == kMaxHalvings) throw;
      h *= 0.5;
    }
  }
  constexpr double shrink2 = kShrink * kShrink;
  double best_error = std::numeric_limits<double>::infinity();
  cplx best = a[0][0];
  for (int i = 1; i < kTableauSize; ++i) {
    h /= kShrink;
    a[i][0] = central_difference(f, point, m, h);
    double factor = shrink2;
    for (int j = 1; j <= i; ++j) {
      a[i][j] = (a[i][j - 1] * factor - a[i - 1][j - 1]) / (factor - 1.0);
      factor *= shrink2;
      const double error = std::max(std::abs(a[i][j] - a[i][j - 1]), std::abs(a[i][j] - a[i - 1][j - 1]));
      if (error <= best_error) {
        best_error = error;
        best = a[i][j];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * best_error) break;
  }
  return best;
}

double default_oracle_step(int) { return 0.02; }

double oracle_relative_error(cplx jet_value, cplx oracle_value) {
  return std::abs(jet_value - oracle_value) / std::max(std::abs(oracle_value), 1.0);
}

}  // namespace prepot
