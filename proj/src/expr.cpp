#include "prepot/expr.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <utility>

#include "prepot/error.hpp"

namespace prepot {

namespace en = expr_node;

Expr::Expr() : Expr(ExprNode{en::Number{0.0}}) {}

Expr::Expr(ExprNode node) : node_(std::make_shared<const ExprNode>(std::move(node))) {}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<std::pair<std::string_view, Function>, 10> kFunctions = {{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
    {"re", Function::re},
    {"im", Function::im},
    {"conj", Function::conj},
}};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return f;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end, bad };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::end, {}, line, col};
    const char c = src_[pos_];
    const std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      advance_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
      if (peek() == '.') {
        bump();
        advance_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
      }
      if (peek() == 'e' || peek() == 'E') {
        const std::size_t save = pos_, save_col = col_;
        bump();
        if (peek() == '+' || peek() == '-') bump();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          advance_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
        } else {
          pos_ = save;
          col_ = save_col;
        }
      }
      return {Tok::number, src_.substr(start, pos_ - start), line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      advance_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
      return {Tok::ident, src_.substr(start, pos_ - start), line, col};
    }
    bump();
    const auto one = src_.substr(start, 1);
    switch (c) {
      case '+': return {Tok::plus, one, line, col};
      case '-': return {Tok::minus, one, line, col};
      case '*': return {Tok::star, one, line, col};
      case '/': return {Tok::slash, one, line, col};
      case '^': return {Tok::caret, one, line, col};
      case '(': return {Tok::lparen, one, line, col};
      case ')': return {Tok::rparen, one, line, col};
      default: return {Tok::bad, one, line, col};
    }
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  template <class Pred>
  void advance_while(Pred pred) {
    while (pos_ < src_.size() && pred(src_[pos_])) bump();
  }

  void skip_space() {
    advance_while([](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; });
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser

class Parser {
 public:
  Parser(std::string_view text, const CoordinateNames& coords, const std::set<std::string>& params)
      : lexer_(text), coords_(coords), params_(params) {
    current_ = lexer_.next();
  }

  Expr parse_all() {
    Expr e = expr();
    if (current_.kind != Tok::end) fail(ParseError::Kind::syntax, "unexpected '" + text() + "'");
    return e;
  }

 private:
  std::string text() const {
    return current_.kind == Tok::end ? std::string("end of input") : std::string(current_.text);
  }

  [[noreturn]] void fail(ParseError::Kind kind, const std::string& what) const {
    throw ParseError(kind, current_.line, current_.column, what);
  }

  Token consume() {
    Token t = current_;
    current_ = lexer_.next();
    return t;
  }

  Expr expr() {
    Expr lhs = term();
    while (current_.kind == Tok::plus || current_.kind == Tok::minus) {
      const BinaryOp op = consume().kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      lhs = Expr(en::Binary{op, lhs, term()});
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (current_.kind == Tok::star || current_.kind == Tok::slash) {
      const BinaryOp op = consume().kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      lhs = Expr(en::Binary{op, lhs, factor()});
    }
    return lhs;
  }

  Expr factor() {
    if (current_.kind == Tok::minus) {
      consume();
      return Expr(en::Negate{factor()});
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (current_.kind != Tok::caret) return base;
    consume();
    if (current_.kind == Tok::minus) fail(ParseError::Kind::bad_exponent, "negative exponent");
    if (current_.kind != Tok::number) {
      fail(ParseError::Kind::bad_exponent, "exponent must be a non-negative integer literal");
    }
    const std::string_view digits = current_.text;
    unsigned n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      fail(ParseError::Kind::bad_exponent, "non-integer exponent '" + std::string(digits) + "'");
    }
    consume();
    return Expr(en::Power{base, n});
  }

  Expr primary() {
    switch (current_.kind) {
      case Tok::number: {
        const std::string_view s = current_.text;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
          fail(ParseError::Kind::syntax, "malformed number '" + std::string(s) + "'");
        }
        consume();
        return Expr(en::Number{v});
      }
      case Tok::lparen: {
        consume();
        Expr inner = expr();
        if (current_.kind != Tok::rparen) fail(ParseError::Kind::syntax, "expected ')' before " + text());
        consume();
        return inner;
      }
      case Tok::ident: return identifier();
      case Tok::bad: fail(ParseError::Kind::syntax, "unexpected character '" + text() + "'");
      default: fail(ParseError::Kind::syntax, "expected an operand before " + text());
    }
  }

  Expr identifier() {
    const Token id = consume();
    const std::string name(id.text);
    if (current_.kind == Tok::lparen) {
      const auto fn = lookup_function(name);
      if (!fn) {
        throw ParseError(ParseError::Kind::unknown_function, id.line, id.column,
                         "unknown function '" + name + "'");
      }
      consume();
      Expr arg = expr();
      if (current_.kind != Tok::rparen) fail(ParseError::Kind::syntax, "expected ')' before " + text());
      consume();
      return Expr(en::Call{*fn, arg});
    }
    if (name == "i") return Expr(en::ImaginaryUnit{});
    if (lookup_function(name)) {
      throw ParseError(ParseError::Kind::syntax, id.line, id.column,
                       "function '" + name + "' must be followed by '('");
    }
    for (int a = 0; a < kDim; ++a) {
      if (coords_[a] == name) return Expr(en::Coordinate{a, name});
    }
    if (params_.contains(name)) return Expr(en::Parameter{name});
    throw ParseError(ParseError::Kind::unknown_identifier, id.line, id.column,
                     "unknown identifier '" + name + "'");
  }

  Lexer lexer_;
  Token current_{};
  const CoordinateNames& coords_;
  const std::set<std::string>& params_;
};

// ---------------------------------------------------------------------------
// Evaluation

double lookup_param(const ParamBinding& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) throw std::invalid_argument("unbound parameter '" + name + "'");
  return it->second;
}

Analytic as_analytic(Function f) {
  switch (f) {
    case Function::sin: return Analytic::sin;
    case Function::cos: return Analytic::cos;
    case Function::sinh: return Analytic::sinh;
    case Function::cosh: return Analytic::cosh;
    case Function::exp: return Analytic::exp;
    case Function::ln: return Analytic::ln;
    case Function::sqrt: return Analytic::sqrt;
    default: throw std::logic_error("not an analytic function");
  }
}

struct JetEvaluator {
  const Point& point;
  const ParamBinding& params;

  Jet operator()(const Expr& e) const { return std::visit(*this, e.node()); }

  Jet operator()(const en::Number& n) const { return Jet::constant(n.value); }
  Jet operator()(const en::ImaginaryUnit&) const { return Jet::constant(cplx{0.0, 1.0}); }
  Jet operator()(const en::Coordinate& c) const { return Jet::coordinate(c.axis, point); }
  Jet operator()(const en::Parameter& p) const { return Jet::constant(lookup_param(params, p.name)); }
  Jet operator()(const en::Negate& n) const { return -(*this)(n.operand); }
  Jet operator()(const en::Binary& b) const {
    const Jet l = (*this)(b.lhs);
    const Jet r = (*this)(b.rhs);
    switch (b.op) {
      case BinaryOp::add: return l + r;
      case BinaryOp::sub: return l - r;
      case BinaryOp::mul: return l * r;
      case BinaryOp::div: return l / r;
    }
    throw std::logic_error("bad binary operator");
  }
  Jet operator()(const en::Power& p) const { return pow((*this)(p.base), static_cast<int>(p.exponent)); }
  Jet operator()(const en::Call& c) const {
    const Jet arg = (*this)(c.arg);
    switch (c.fn) {
      case Function::re: return re(arg);
      case Function::im: return im(arg);
      case Function::conj: return conj(arg);
      default: return compose(as_analytic(c.fn), arg);
    }
  }
};

struct ValueEvaluator {
  const Point& point;
  const ParamBinding& params;

  cplx operator()(const Expr& e) const { return std::visit(*this, e.node()); }

  cplx operator()(const en::Number& n) const { return n.value; }
  cplx operator()(const en::ImaginaryUnit&) const { return {0.0, 1.0}; }
  cplx operator()(const en::Coordinate& c) const { return point[static_cast<std::size_t>(c.axis)]; }
  cplx operator()(const en::Parameter& p) const { return lookup_param(params, p.name); }
  cplx operator()(const en::Negate& n) const { return -(*this)(n.operand); }
  cplx operator()(const en::Binary& b) const {
    const cplx l = (*this)(b.lhs);
    const cplx r = (*this)(b.rhs);
    switch (b.op) {
      case BinaryOp::add: return l + r;
      case BinaryOp::sub: return l - r;
      case BinaryOp::mul: return l * r;
      case BinaryOp::div:
        if (r == cplx{}) throw DomainError("division by zero");
        return l / r;
    }
    throw std::logic_error("bad binary operator");
  }
  cplx operator()(const en::Power& p) const {
    const cplx b = (*this)(p.base);
    cplx out = 1.0;
    for (unsigned k = 0; k < p.exponent; ++k) out *= b;
    return out;
  }
  cplx operator()(const en::Call& c) const {
    const cplx arg = (*this)(c.arg);
    switch (c.fn) {
      case Function::re: return arg.real();
      case Function::im: return arg.imag();
      case Function::conj: return std::conj(arg);
      default: return analytic_value(as_analytic(c.fn), arg);
    }
  }
};

void collect(const Expr& e, std::set<std::string>& coords, std::set<std::string>& params) {
  std::visit(Overloaded{
                 [&](const en::Coordinate& c) { coords.insert(c.name); },
                 [&](const en::Parameter& p) { params.insert(p.name); },
                 [&](const en::Negate& n) { collect(n.operand, coords, params); },
                 [&](const en::Binary& b) {
                   collect(b.lhs, coords, params);
                   collect(b.rhs, coords, params);
                 },
                 [&](const en::Power& p) { collect(p.base, coords, params); },
                 [&](const en::Call& c) { collect(c.arg, coords, params); },
                 [](const auto&) {},
             },
             e.node());
}

std::string render(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const en::Number& n) {
            std::array<char, 32> buf{};
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
            return std::string(buf.data(), res.ptr);
          },
          [](const en::ImaginaryUnit&) { return std::string("i"); },
          [](const en::Coordinate& c) { return c.name; },
          [](const en::Parameter& p) { return p.name; },
          [](const en::Negate& n) { return "(-" + render(n.operand) + ")"; },
          [](const en::Binary& b) {
            static constexpr std::array<const char*, 4> ops = {" + ", " - ", " * ", " / "};
            return "(" + render(b.lhs) + ops[static_cast<std::size_t>(b.op)] + render(b.rhs) + ")";
          },
          [](const en::Power& p) {
            return "(" + render(p.base) + "^" + std::to_string(p.exponent) + ")";
          },
          [](const en::Call& c) {
            return std::string(function_name(c.fn)) + "(" + render(c.arg) + ")";
          },
      },
      e.node());
}

bool same_tree(const Expr& a, const Expr& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      Overloaded{
          [&](const en::Number& n) { return n.value == std::get<en::Number>(b.node()).value; },
          [](const en::ImaginaryUnit&) { return true; },
          [&](const en::Coordinate& c) { return c.axis == std::get<en::Coordinate>(b.node()).axis; },
          [&](const en::Parameter& p) { return p.name == std::get<en::Parameter>(b.node()).name; },
          [&](const en::Negate& n) { return same_tree(n.operand, std::get<en::Negate>(b.node()).operand); },
          [&](const en::Binary& x) {
            const auto& y = std::get<en::Binary>(b.node());
            return x.op == y.op && same_tree(x.lhs, y.lhs) && same_tree(x.rhs, y.rhs);
          },
          [&](const en::Power& x) {
            const auto& y = std::get<en::Power>(b.node());
            return x.exponent == y.exponent && same_tree(x.base, y.base);
          },
          [&](const en::Call& x) {
            const auto& y = std::get<en::Call>(b.node());
            return x.fn == y.fn && same_tree(x.arg, y.arg);
          },
      },
      a.node());
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return same_tree(a, b); }

Expr parse(std::string_view text, const CoordinateNames& coordinates,
           const std::set<std::string>& parameters) {
  return Parser(text, coordinates, parameters).parse_all();
}

Jet eval_jet(const Expr& e, const Point& point, const ParamBinding& params) {
  return JetEvaluator{point, params}(e);
}

cplx eval_value(const Expr& e, const Point& point, const ParamBinding& params) {
  return ValueEvaluator{point, params}(e);
}

std::set<std::string> free_coordinates(const Expr& e) {
  std::set<std::string> coords, params;
  collect(e, coords, params);
  return coords;
}

std::set<std::string> free_parameters(const Expr& e) {
  std::set<std::string> coords, params;
  collect(e, coords, params);
  return params;
}

std::string to_string(const Expr& e) { return render(e); }

const char* function_name(Function f) {
  for (const auto& [n, fn] : kFunctions) {
    if (fn == f) return n.data();
  }
  return "?";
}

}  // namespace prepot
