#pragma once

/// Truncated multivariate Taylor expansions ("jets") in four real variables.
///
/// A Jet stores the Taylor coefficients of a complex-valued function of
/// (x0, x1, x2, x3) about a base point, up to total degree 3:
///
///     f(p + d) = sum over |m| <= 3 of  c_m * d^m,   c_m = (d^m f)(p) / m!
///
/// with m a multi-index and m! = m0! m1! m2! m3!. Every derivative in the
/// library is read off a Jet; there is no symbolic or finite-difference
/// differentiation on the production path.
///
/// Each jet also records how many derivative levels it can be trusted for
/// (`order()`). Coordinates and constants are exact to order 3; `diff()`
/// consumes one level, and binary operations keep the smaller order.
/// Coefficients above `order()` are held at zero.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace prepot {

using cplx = std::complex<double>;

inline constexpr int kDim = 4;
inline constexpr int kJetOrder = 3;
inline constexpr std::size_t kJetSize = 35;  // C(4 + 3, 3)

using Point = std::array<double, kDim>;

/// Exponents of a mixed partial derivative, one per coordinate.
struct MultiIndex {
  std::array<int, kDim> exponents{};

  constexpr int degree() const noexcept {
    return exponents[0] + exponents[1] + exponents[2] + exponents[3];
  }

  /// Multi-index of d/dx^a d/dx^b ... built from a list of axes.
  static MultiIndex of_axes(std::initializer_list<int> axes);

  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Position of `m` in the dense coefficient array (degree-major order).
/// Throws std::out_of_range when a degree exceeds 3 or an exponent is negative.
std::size_t jet_slot(const MultiIndex& m);

/// The multi-index stored at a slot.
const MultiIndex& jet_multi_index(std::size_t slot);

enum class Analytic : std::uint8_t { sin, cos, sinh, cosh, exp, ln, sqrt };

class Jet {
 public:
  /// The zero jet (exact to order 3).
  Jet() = default;

  static Jet constant(cplx c);
  /// The coordinate function x^axis expanded about `point`.
  static Jet coordinate(int axis, const Point& point);

  cplx value() const noexcept { return coeffs_[0]; }
  int order() const noexcept { return order_; }

  /// Mixed partial derivative d^m f at the base point.
  cplx extract(const MultiIndex& m) const;
  cplx d(int a) const { return extract(MultiIndex::of_axes({a})); }
  cplx d(int a, int b) const { return extract(MultiIndex::of_axes({a, b})); }
  cplx d(int a, int b, int c) const { return extract(MultiIndex::of_axes({a, b, c})); }

  /// Raw Taylor coefficients (not derivatives).
  std::span<const cplx, kJetSize> coefficients() const noexcept { return coeffs_; }
  cplx coefficient(std::size_t slot) const { return coeffs_.at(slot); }

  /// Partial derivative jet d/dx^axis; order drops by one.
  Jet diff(int axis) const;
  /// Copy with order lowered to `order` and higher coefficients dropped.
  Jet truncated(int order) const;

  bool is_finite() const noexcept;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator*=(cplx s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator/(const Jet& a, const Jet& b);

  /// Coefficient-exact comparison, including the order.
  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  friend Jet recip(const Jet& a);
  friend Jet compose(Analytic f, const Jet& a);
  friend Jet re(const Jet& a);
  friend Jet im(const Jet& a);
  friend Jet conj(const Jet& a);

  std::array<cplx, kJetSize> coeffs_{};
  int order_ = kJetOrder;
};

/// Multiplicative inverse. Throws DomainError when the value part is zero.
Jet recip(const Jet& a);
/// a^n by repeated multiplication; n = 0 gives the unit jet.
Jet pow(const Jet& a, int n);
/// f(a) through degree 3 from f, f', f'', f''' at a.value(). ln and sqrt use
/// the principal branch; a value on the cut (real part <= 0, imaginary part 0)
/// throws DomainError.
Jet compose(Analytic f, const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet exp(const Jet& a);
Jet ln(const Jet& a);
Jet sqrt(const Jet& a);

Jet re(const Jet& a);
Jet im(const Jet& a);
Jet conj(const Jet& a);

/// Scalar function values f, f', f'', f''' at z. Throws DomainError on a cut.
std::array<cplx, 4> analytic_derivatives(Analytic f, cplx z);
/// f(z) alone, with the same branch conventions.
cplx analytic_value(Analytic f, cplx z);

const char* analytic_name(Analytic f);

}  // namespace prepot
