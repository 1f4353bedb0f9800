#include "prepot/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "prepot/error.hpp"

namespace prepot {
namespace {

struct ProductTerm {
  std::uint8_t lhs;
  std::uint8_t rhs;
};

// Index bookkeeping shared by every jet operation. Built once.
struct JetTables {
  std::array<MultiIndex, kJetSize> index{};
  std::array<int, kJetSize> degree{};
  std::array<double, kJetSize> factorial{};  // m0! m1! m2! m3!
  std::array<std::int8_t, 256> lookup{};     // base-4 exponent code -> slot
  // shift[s][a]: slot of index[s] + e_a, or -1 past degree 3.
  std::array<std::array<std::int8_t, kDim>, kJetSize> shift{};
  // Leibniz pairs (i, j) with index[i] + index[j] == index[k], grouped by k.
  std::vector<ProductTerm> products;
  std::array<std::size_t, kJetSize + 1> product_begin{};
  // First slot of each degree, plus an end sentinel.
  std::array<std::size_t, kJetOrder + 2> degree_begin{};

  static int code(const MultiIndex& m) {
    return m.exponents[0] + 4 * m.exponents[1] + 16 * m.exponents[2] + 64 * m.exponents[3];
  }

  JetTables() {
    lookup.fill(-1);
    std::size_t slot = 0;
    auto add = [&](MultiIndex m) {
      index[slot] = m;
      degree[slot] = m.degree();
      double f = 1.0;
      for (int e : m.exponents) {
        for (int k = 2; k <= e; ++k) f *= k;
      }
      factorial[slot] = f;
      lookup[code(m)] = static_cast<std::int8_t>(slot);
      ++slot;
    };
    // Degree-major; within a degree, sorted axis tuples a <= b <= c.
    degree_begin[0] = slot;
    add(MultiIndex{});
    degree_begin[1] = slot;
    for (int a = 0; a < kDim; ++a) add(MultiIndex::of_axes({a}));
    degree_begin[2] = slot;
    for (int a = 0; a < kDim; ++a)
      for (int b = a; b < kDim; ++b) add(MultiIndex::of_axes({a, b}));
    degree_begin[3] = slot;
    for (int a = 0; a < kDim; ++a)
      for (int b = a; b < kDim; ++b)
        for (int c = b; c < kDim; ++c) add(MultiIndex::of_axes({a, b, c}));
    degree_begin[4] = slot;

    for (std::size_t s = 0; s < kJetSize; ++s) {
      for (int a = 0; a < kDim; ++a) {
        MultiIndex up = index[s];
        ++up.exponents[a];
        shift[s][a] = up.degree() <= kJetOrder ? lookup[code(up)] : std::int8_t{-1};
      }
    }

    for (std::size_t k = 0; k < kJetSize; ++k) {
      product_begin[k] = products.size();
      for (std::size_t i = 0; i < kJetSize; ++i) {
        MultiIndex rest = index[k];
        bool fits = true;
        for (int a = 0; a < kDim; ++a) {
          rest.exponents[a] -= index[i].exponents[a];
          fits = fits && rest.exponents[a] >= 0;
        }
        if (!fits) continue;
        products.push_back({static_cast<std::uint8_t>(i),
                            static_cast<std::uint8_t>(lookup[code(rest)])});
      }
    }
    product_begin[kJetSize] = products.size();
  }
};

const JetTables& tables() {
  static const JetTables t;
  return t;
}

std::size_t slots_through(int order) { return tables().degree_begin[order + 1]; }

bool on_branch_cut(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0; }

}  // namespace

MultiIndex MultiIndex::of_axes(std::initializer_list<int> axes) {
  MultiIndex m;
  for (int a : axes) {
    if (a < 0 || a >= kDim) throw std::out_of_range("coordinate axis " + std::to_string(a));
    ++m.exponents[a];
  }
  return m;
}

std::size_t jet_slot(const MultiIndex& m) {
  for (int e : m.exponents) {
    if (e < 0) throw std::out_of_range("negative exponent in multi-index");
  }
  if (m.degree() > kJetOrder) {
    throw std::out_of_range("multi-index degree " + std::to_string(m.degree()) + " exceeds 3");
  }
  return static_cast<std::size_t>(tables().lookup[JetTables::code(m)]);
}

const MultiIndex& jet_multi_index(std::size_t slot) { return tables().index.at(slot); }

Jet Jet::constant(cplx c) {
  Jet j;
  j.coeffs_[0] = c;
  return j;
}

Jet Jet::coordinate(int axis, const Point& point) {
  if (axis < 0 || axis >= kDim) throw std::out_of_range("coordinate axis " + std::to_string(axis));
  Jet j;
  j.coeffs_[0] = point[axis];
  j.coeffs_[1 + axis] = 1.0;
  return j;
}

cplx Jet::extract(const MultiIndex& m) const {
  const std::size_t slot = jet_slot(m);
  if (m.degree() > order_) {
    throw std::out_of_range("derivative of degree " + std::to_string(m.degree()) +
                            " requested from a jet of order " + std::to_string(order_));
  }
  return coeffs_[slot] * tables().factorial[slot];
}

Jet Jet::diff(int axis) const {
  if (axis < 0 || axis >= kDim) throw std::out_of_range("coordinate axis " + std::to_string(axis));
  if (order_ == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  const auto& t = tables();
  Jet out;
  out.order_ = order_ - 1;
  const std::size_t n = slots_through(out.order_);
  for (std::size_t s = 0; s < n; ++s) {
    const auto up = static_cast<std::size_t>(t.shift[s][axis]);
    out.coeffs_[s] = coeffs_[up] * static_cast<double>(t.index[s].exponents[axis] + 1);
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order < 0 || order > kJetOrder) throw std::out_of_range("jet order " + std::to_string(order));
  if (order >= order_) return *this;
  Jet out = *this;
  out.order_ = order;
  std::fill(out.coeffs_.begin() + static_cast<std::ptrdiff_t>(slots_through(order)),
            out.coeffs_.end(), cplx{});
  return out;
}

bool Jet::is_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  order_ = std::min(order_, rhs.order_);
  const std::size_t n = slots_through(order_);
  for (std::size_t s = 0; s < n; ++s) coeffs_[s] += rhs.coeffs_[s];
  std::fill(coeffs_.begin() + static_cast<std::ptrdiff_t>(n), coeffs_.end(), cplx{});
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  order_ = std::min(order_, rhs.order_);
  const std::size_t n = slots_through(order_);
  for (std::size_t s = 0; s < n; ++s) coeffs_[s] -= rhs.coeffs_[s];
  std::fill(coeffs_.begin() + static_cast<std::ptrdiff_t>(n), coeffs_.end(), cplx{});
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet& Jet::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const auto& t = tables();
  Jet out;
  out.order_ = std::min(a.order_, b.order_);
  const std::size_t n = slots_through(out.order_);
  for (std::size_t k = 0; k < n; ++k) {
    cplx sum{};
    for (std::size_t p = t.product_begin[k]; p < t.product_begin[k + 1]; ++p) {
      sum += a.coeffs_[t.products[p].lhs] * b.coeffs_[t.products[p].rhs];
    }
    out.coeffs_[k] = sum;
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet recip(const Jet& a) {
  const cplx a0 = a.coeffs_[0];
  if (a0 == cplx{}) throw DomainError("reciprocal of a jet with zero value part");
  const auto& t = tables();
  Jet r;
  r.order_ = a.order_;
  r.coeffs_[0] = 1.0 / a0;
  // Solve (a * r)_k = 0 for k > 0 in degree order; r_k only depends on
  // lower-degree coefficients of r.
  const std::size_t n = slots_through(r.order_);
  for (std::size_t k = 1; k < n; ++k) {
    cplx sum{};
    for (std::size_t p = t.product_begin[k]; p < t.product_begin[k + 1]; ++p) {
      if (t.products[p].rhs == k) continue;
      sum += a.coeffs_[t.products[p].lhs] * r.coeffs_[t.products[p].rhs];
    }
    r.coeffs_[k] = -sum / a0;
  }
  return r;
}

Jet pow(const Jet& a, int n) {
  if (n < 0) throw std::invalid_argument("negative integer power of a jet");
  Jet out = Jet::constant(1.0);
  for (int k = 0; k < n; ++k) out *= a;
  return out;
}

std::array<cplx, 4> analytic_derivatives(Analytic f, cplx z) {
  switch (f) {
    case Analytic::sin: {
      const cplx s = std::sin(z), c = std::cos(z);
      return {s, c, -s, -c};
    }
    case Analytic::cos: {
      const cplx s = std::sin(z), c = std::cos(z);
      return {c, -s, -c, s};
    }
    case Analytic::sinh: {
      const cplx s = std::sinh(z), c = std::cosh(z);
      return {s, c, s, c};
    }
    case Analytic::cosh: {
      const cplx s = std::sinh(z), c = std::cosh(z);
      return {c, s, c, s};
    }
    case Analytic::exp: {
      const cplx e = std::exp(z);
      return {e, e, e, e};
    }
    case Analytic::ln: {
      if (on_branch_cut(z)) throw DomainError("ln evaluated on its branch cut");
      const cplx inv = 1.0 / z;
      return {std::log(z), inv, -inv * inv, 2.0 * inv * inv * inv};
    }
    case Analytic::sqrt: {
      if (on_branch_cut(z)) throw DomainError("sqrt evaluated on its branch cut");
      const cplx w = std::sqrt(z);
      const cplx inv = 1.0 / z;
      return {w, 0.5 / w, -0.25 * inv / w, 0.375 * inv * inv / w};
    }
  }
  throw std::invalid_argument("unknown analytic function");
}

cplx analytic_value(Analytic f, cplx z) {
  switch (f) {
    case Analytic::sin: return std::sin(z);
    case Analytic::cos: return std::cos(z);
    case Analytic::sinh: return std::sinh(z);
    case Analytic::cosh: return std::cosh(z);
    case Analytic::exp: return std::exp(z);
    case Analytic::ln:
      if (on_branch_cut(z)) throw DomainError("ln evaluated on its branch cut");
      return std::log(z);
    case Analytic::sqrt:
      if (on_branch_cut(z)) throw DomainError("sqrt evaluated on its branch cut");
      return std::sqrt(z);
  }
  throw std::invalid_argument("unknown analytic function");
}

Jet compose(Analytic f, const Jet& a) {
  const auto d = analytic_derivatives(f, a.coeffs_[0]);
  Jet delta = a;
  delta.coeffs_[0] = 0.0;
  // Horner in the nilpotent part: sum_k f^(k)(a0)/k! * delta^k.
  Jet out = Jet::constant(d[3] / 6.0);
  out = out * delta + Jet::constant(d[2] / 2.0);
  out = out * delta + Jet::constant(d[1]);
  out = out * delta + Jet::constant(d[0]);
  return out.truncated(a.order_);
}

Jet sin(const Jet& a) { return compose(Analytic::sin, a); }
Jet cos(const Jet& a) { return compose(Analytic::cos, a); }
Jet sinh(const Jet& a) { return compose(Analytic::sinh, a); }
Jet cosh(const Jet& a) { return compose(Analytic::cosh, a); }
Jet exp(const Jet& a) { return compose(Analytic::exp, a); }
Jet ln(const Jet& a) { return compose(Analytic::ln, a); }
Jet sqrt(const Jet& a) { return compose(Analytic::sqrt, a); }

Jet re(const Jet& a) {
  Jet out = a;
  for (auto& c : out.coeffs_) c = c.real();
  return out;
}

Jet im(const Jet& a) {
  Jet out = a;
  for (auto& c : out.coeffs_) c = c.imag();
  return out;
}

Jet conj(const Jet& a) {
  Jet out = a;
  for (auto& c : out.coeffs_) c = std::conj(c);
  return out;
}

const char* analytic_name(Analytic f) {
  switch (f) {
    case Analytic::sin: return "sin";
    case Analytic::cos: return "cos";
    case Analytic::sinh: return "sinh";
    case Analytic::cosh: return "cosh";
    case Analytic::exp: return "exp";
    case Analytic::ln: return "ln";
    case Analytic::sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace prepot
