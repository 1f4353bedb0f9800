#include "random_expr.hpp"

#include <sstream>

namespace prepot::testing {
namespace {

const std::array<const char*, 4> kCoords = {"t", "x", "y", "z"};

double coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-9, 9);
  int v = 0;
  while (v == 0) v = d(rng);
  return v / 10.0;
}

std::string number(double v) {
  std::ostringstream os;
  os << v;
  return v < 0 ? "(" + os.str() + ")" : os.str();
}

std::string leaf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> axis(0, 3);
  std::uniform_int_distribution<int> kind(0, 4);
  const std::string a = kCoords[axis(rng)];
  const std::string b = kCoords[axis(rng)];
  switch (kind(rng)) {
    case 0:
      return "(" + number(coefficient(rng)) + "*" + a + " + " + number(coefficient(rng)) + ")";
    case 1:
      return "(" + a + " + i*" + number(coefficient(rng)) + "*" + b + ")";
    case 2:
      return "(" + number(coefficient(rng)) + "*" + a + "*" + b + ")";
    case 3:
      return "(" + a + " - " + number(coefficient(rng)) + "*" + b + ")^2";
    default:
      return "(" + number(coefficient(rng)) + "*" + a + " + " + number(coefficient(rng)) + "*" + b + ")";
  }
}

std::string wrap(Analytic f, const std::string& inner) {
  switch (f) {
    case Analytic::sin:
      return "sin(" + inner + ")";
    case Analytic::cos:
      return "cos(" + inner + ")";
    case Analytic::sinh:
      return "sinh(sin(" + inner + "))";
    case Analytic::cosh:
      return "cosh(sin(" + inner + "))";
    case Analytic::exp:
      return "exp(0.5*sin(" + inner + "))";
    case Analytic::ln:
      return "ln(2 + sin(" + inner + "))";
    case Analytic::sqrt:
      return "sqrt(2 + cos(" + inner + "))";
  }
  return inner;
}

std::string build(std::mt19937_64& rng, int depth) {
  if (depth <= 0) return leaf(rng);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> tag(0, 6);
  const int k = pick(rng);
  if (k < 4) return wrap(kAllAnalytic[tag(rng)], build(rng, depth - 1));
  if (k == 4) return "(" + build(rng, depth - 1) + " + " + build(rng, depth - 1) + ")";
  if (k == 5) return "(" + build(rng, depth - 1) + " * " + build(rng, depth - 1) + ")";
  if (k == 6) return "(" + build(rng, depth - 1) + " / (2 + cos(" + build(rng, depth - 1) + ")))";
  if (k == 7) return "re(" + build(rng, depth - 1) + ")";
  if (k == 8) return "conj(" + build(rng, depth - 1) + ")";
  return "-" + build(rng, depth - 1);
}

}  // namespace

std::string random_expression(std::mt19937_64& rng, Analytic root, int depth) {
  return wrap(root, build(rng, depth - 1));
}

std::string random_smooth(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tag(0, 6);
  return "(" + wrap(kAllAnalytic[tag(rng)], leaf(rng)) + " * " + leaf(rng) + " + " + leaf(rng) + ")";
}

Point random_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Point p{};
  for (auto& c : p) c = d(rng);
  return p;
}

}  // namespace prepot::testing
