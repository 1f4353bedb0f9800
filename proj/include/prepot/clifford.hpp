#pragma once

#include <array>
#include <span>

#include "prepot/geometry.hpp"
#include "prepot/jet.hpp"

namespace prepot {

/// Exact Gaussian integer a + b i, used to check the Clifford relations
/// without floating point.
struct GaussianInt {
  long re = 0;
  long im = 0;

  friend constexpr GaussianInt operator+(GaussianInt a, GaussianInt b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend constexpr GaussianInt operator-(GaussianInt a, GaussianInt b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend constexpr GaussianInt operator*(GaussianInt a, GaussianInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr bool operator==(GaussianInt, GaussianInt) = default;
};

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

using Mat4c = Mat4<cplx>;
using Mat4z = Mat4<GaussianInt>;

template <class T>
Mat4<T> operator*(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] = out[i][j] + a[i][k] * b[k][j];
  return out;
}

template <class T>
Mat4<T> operator+(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = a[i][j] + b[i][j];
  return out;
}

/// gamma^0 = sigma^3 (x) I, gamma^j = i sigma^2 (x) sigma^j, with
/// sigma^1 = [[0,1],[1,0]], sigma^2 = [[0,-i],[i,0]], sigma^3 = [[1,0],[0,-1]].
const std::array<Mat4z, 4>& gamma_matrices_exact();
const std::array<Mat4c, 4>& gamma_matrices();

/// gamma^mu g_mu for a covariant gradient.
Mat4c slash(std::span<const cplx, 4> grad);

using Spinor = std::array<Jet, 4>;
using VectorSpinor = std::array<Spinor, 4>;

Spinor apply_matrix(const Mat4c& m, const Spinor& s);

/// Matrix of jets, e.g. the slash of a jet-valued gradient.
using JetMat4 = Mat4<Jet>;

/// gamma^mu g_mu with jet-valued gradient components.
JetMat4 slash(const std::array<Jet, 4>& grad);

Spinor apply_matrix(const JetMat4& m, const Spinor& s);

/// gamma^mu d_mu s; consumes one derivative level.
Spinor slash_derivative(const Spinor& s);

}  // namespace prepot
