#include "prepot/clifford.hpp"

namespace prepot {
namespace {

using Mat2z = std::array<std::array<GaussianInt, 2>, 2>;

Mat4z kron(const Mat2z& a, const Mat2z& b) {
  Mat4z out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return out;
}

std::array<Mat4z, 4> build_exact() {
  constexpr GaussianInt zero{0, 0}, one{1, 0}, i{0, 1};
  const Mat2z identity = {{{one, zero}, {zero, one}}};
  const Mat2z s1 = {{{zero, one}, {one, zero}}};
  const Mat2z s2 = {{{zero, zero - i}, {i, zero}}};
  const Mat2z s3 = {{{one, zero}, {zero, zero - one}}};
  Mat2z i_s2{};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) i_s2[r][c] = i * s2[r][c];
  return {kron(s3, identity), kron(i_s2, s1), kron(i_s2, s2), kron(i_s2, s3)};
}

std::array<Mat4c, 4> build_complex() {
  std::array<Mat4c, 4> out{};
  const auto& exact = gamma_matrices_exact();
  for (int mu = 0; mu < 4; ++mu)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const GaussianInt z = exact[mu][r][c];
        out[mu][r][c] = cplx(static_cast<double>(z.re), static_cast<double>(z.im));
      }
  return out;
}

}  // namespace

const std::array<Mat4z, 4>& gamma_matrices_exact() {
  static const std::array<Mat4z, 4> g = build_exact();
  return g;
}

const std::array<Mat4c, 4>& gamma_matrices() {
  static const std::array<Mat4c, 4> g = build_complex();
  return g;
}

Mat4c slash(std::span<const cplx, 4> grad) {
  const auto& g = gamma_matrices();
  Mat4c out{};
  for (int mu = 0; mu < 4; ++mu)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out[r][c] += g[mu][r][c] * grad[mu];
  return out;
}

Spinor apply_matrix(const Mat4c& m, const Spinor& s) {
  Spinor out;
  for (int r = 0; r < 4; ++r) {
    Jet sum = Jet::constant(0.0);
    for (int c = 0; c < 4; ++c) {
      if (m[r][c] != cplx{}) sum += s[c] * m[r][c];
    }
    int order = kJetOrder;
    for (const auto& e : s) order = std::min(order, e.order());
    out[r] = sum.truncated(order);
  }
  return out;
}

JetMat4 slash(const std::array<Jet, 4>& grad) {
  const auto& g = gamma_matrices();
  JetMat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      Jet sum = Jet::constant(0.0);
      for (int mu = 0; mu < 4; ++mu) {
        if (g[mu][r][c] != cplx{}) sum += grad[mu] * g[mu][r][c];
      }
      int order = kJetOrder;
      for (const auto& e : grad) order = std::min(order, e.order());
      out[r][c] = sum.truncated(order);
    }
  return out;
}

Spinor apply_matrix(const JetMat4& m, const Spinor& s) {
  Spinor out;
  for (int r = 0; r < 4; ++r) {
    Jet sum = Jet::constant(0.0);
    for (int c = 0; c < 4; ++c) sum += m[r][c] * s[c];
    out[r] = sum;
  }
  return out;
}

Spinor slash_derivative(const Spinor& s) {
  Spinor out;
  for (auto& e : out) e = Jet::constant(0.0);
  for (int mu = 0; mu < 4; ++mu) {
    Spinor ds;
    for (int c = 0; c < 4; ++c) ds[c] = s[c].diff(mu);
    const Spinor term = apply_matrix(gamma_matrices()[mu], ds);
    for (int r = 0; r < 4; ++r) out[r] += term[r];
  }
  return out;
}

}  // namespace prepot
