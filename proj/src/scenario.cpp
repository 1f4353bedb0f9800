#include "prepot/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "prepot/error.hpp"

namespace prepot {
namespace {

constexpr std::array<const char*, 7> kSectorNames = {
    "klein_gordon",     "dirac_products",      "dirac_maxwell", "maxwell",
    "rarita_schwinger", "linearized_einstein", "full_einstein"};

constexpr std::array<const char*, 6> kConditionNames = {
    "dalembert", "gradient_orthogonality", "hessian", "commutation", "independence",
    "disjoint_supports"};

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names = {"i",   "sin", "cos", "sinh", "cosh", "exp",
                                              "ln",  "sqrt", "re", "im",   "conj"};
  return names;
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t value_column = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

class Reader {
 public:
  Reader(std::string_view text, std::string_view origin) : origin_(origin) { split(text); }

  const std::vector<Section>& sections() const { return sections_; }

  const Section* find(std::string_view name) const {
    for (const auto& s : sections_) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& message) const {
    throw ScenarioError(ScenarioError::Kind::format,
                        origin_ + ":" + std::to_string(line) + ": " + message);
  }

  [[noreturn]] void semantic(std::size_t line, const std::string& message) const {
    throw ScenarioError(ScenarioError::Kind::semantic,
                        origin_ + ":" + std::to_string(line) + ": " + message);
  }

  std::string quoted(const Entry& e) const {
    const std::string_view v = e.value;
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
      fail(e.line, "value of '" + e.key + "' must be a quoted expression");
    return std::string(v.substr(1, v.size() - 2));
  }

  Expr expression(const Entry& e, const CoordinateNames& coords,
                  const std::set<std::string>& params) const {
    const std::string text = quoted(e);
    try {
      return parse(text, coords, params);
    } catch (const ParseError& err) {
      // The expression starts one column after the opening quote.
      const std::size_t column = e.value_column + err.column();
      std::string what = err.what();
      const auto pos = what.find(": ");
      if (pos != std::string::npos) what = what.substr(pos + 2);
      fail(e.line, "column " + std::to_string(column) + ": " + what);
    }
  }

  std::vector<std::string> list(const Entry& e) const {
    std::vector<std::string> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      if (item.empty()) fail(e.line, "empty item in list for '" + e.key + "'");
      out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  double number(const Entry& e, std::string_view text) const {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
      fail(e.line, "'" + std::string(text) + "' is not a finite number");
    return v;
  }

  std::uint64_t integer(const Entry& e) const {
    std::uint64_t v = 0;
    const std::string_view text = e.value;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      fail(e.line, "'" + e.value + "' is not a non-negative integer");
    return v;
  }

  bool boolean(const Entry& e) const {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(e.line, "'" + e.value + "' is not true or false");
  }

 private:
  void split(std::string_view text) {
    std::set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view raw = text.substr(0, nl);
      text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
      ++line_no;

      bool in_quote = false;
      std::size_t cut = raw.size();
      for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k] == '"') in_quote = !in_quote;
        if (raw[k] == '#' && !in_quote) {
          cut = k;
          break;
        }
      }
      if (in_quote) fail(line_no, "unterminated quote");
      const std::string_view line = trim(raw.substr(0, cut));
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header");
        std::string name(trim(line.substr(1, line.size() - 2)));
        if (!seen.insert(name).second) fail(line_no, "duplicate section [" + name + "]");
        sections_.push_back({std::move(name), line_no, {}});
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
      if (sections_.empty()) fail(line_no, "entry outside of any section");
      Entry e;
      e.key = std::string(trim(line.substr(0, eq)));
      const std::string_view after = line.substr(eq + 1);
      const std::string_view value = trim(after);
      e.value = std::string(value);
      e.line = line_no;
      e.value_column =
          static_cast<std::size_t>(value.data() - raw.data()) + 1;  // 1-based, at the quote
      if (e.key.empty()) fail(line_no, "empty key");
      if (e.value.empty()) fail(line_no, "empty value for '" + e.key + "'");
      auto& entries = sections_.back().entries;
      for (const auto& prev : entries) {
        if (prev.key == e.key) fail(line_no, "duplicate key '" + e.key + "'");
      }
      entries.push_back(std::move(e));
    }
  }

  std::string origin_;
  std::vector<Section> sections_;
};

const std::set<std::string> kKnownSections = {
    "scenario", "chart", "params", "prepotentials", "pairs",
    "rarita_schwinger", "dirac_column", "checks", "sampling"};

int axis_of(const CoordinateNames& coords, std::string_view name) {
  for (int a = 0; a < kDim; ++a) {
    if (coords[a] == name) return a;
  }
  return -1;
}

Chart inline_chart(const Reader& r, const Section& s) {
  Chart c;
  c.name = "inline";
  const Entry* coords = nullptr;
  for (const auto& e : s.entries) {
    if (e.key == "coordinates") coords = &e;
  }
  if (!coords) r.fail(s.line, "[chart] needs 'coordinates'");
  const auto names = r.list(*coords);
  if (names.size() != kDim) r.fail(coords->line, "a chart has exactly four coordinates");
  std::set<std::string> unique;
  for (int a = 0; a < kDim; ++a) {
    if (!is_identifier(names[a]) || reserved_names().count(names[a]))
      r.fail(coords->line, "'" + names[a] + "' is not a usable coordinate name");
    if (!unique.insert(names[a]).second) r.fail(coords->line, "duplicate coordinate '" + names[a] + "'");
    c.coordinates[a] = names[a];
  }
  for (auto& e : c.metric) e = Expr();
  for (const auto& e : s.entries) {
    if (e.key == "coordinates") continue;
    if (e.key == "name") {
      c.name = e.value;
    } else if (e.key == "admit") {
      c.admit = r.expression(e, c.coordinates, {});
    } else if (e.key.rfind("metric.", 0) == 0) {
      const std::string_view rest = std::string_view(e.key).substr(7);
      const auto dot = rest.find('.');
      const int a = dot == std::string_view::npos ? -1 : axis_of(c.coordinates, rest.substr(0, dot));
      const int b = dot == std::string_view::npos ? -1 : axis_of(c.coordinates, rest.substr(dot + 1));
      if (a < 0 || b < 0) r.fail(e.line, "metric key must be metric.<coord>.<coord>");
      c.metric[sym_index(a, b)] = r.expression(e, c.coordinates, {});
    } else {
      r.fail(e.line, "unknown key '" + e.key + "' in [chart]");
    }
  }
  c.default_box = {Interval{}, Interval{}, Interval{}, Interval{}};
  return c;
}

}  // namespace

const char* to_string(Sector s) { return kSectorNames[static_cast<std::size_t>(s)]; }
const char* to_string(Condition c) { return kConditionNames[static_cast<std::size_t>(c)]; }

std::optional<Sector> parse_sector(std::string_view name) {
  for (std::size_t k = 0; k < kSectorNames.size(); ++k) {
    if (name == kSectorNames[k]) return static_cast<Sector>(k);
  }
  return std::nullopt;
}

std::optional<Condition> parse_condition(std::string_view name) {
  for (std::size_t k = 0; k < kConditionNames.size(); ++k) {
    if (name == kConditionNames[k]) return static_cast<Condition>(k);
  }
  return std::nullopt;
}

bool needs_minkowski(Sector s) {
  return s == Sector::dirac_products || s == Sector::dirac_maxwell ||
         s == Sector::rarita_schwinger || s == Sector::linearized_einstein;
}

const Prepotential& Scenario::prepotential(std::string_view n) const {
  for (const auto& u : prepotentials) {
    if (u.name == n) return u;
  }
  throw std::out_of_range("no pre-potential named '" + std::string(n) + "'");
}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  const Reader r(text, origin);
  if (r.sections().empty()) r.fail(1, "empty scenario (no sections)");
  for (const auto& s : r.sections()) {
    if (!kKnownSections.count(s.name)) r.fail(s.line, "unknown section [" + s.name + "]");
  }
  const Section* head = r.find("scenario");
  if (!head) r.fail(1, "missing [scenario] section");

  Scenario sc;
  const Entry* chart_ref = nullptr;
  const Entry* gauge = nullptr;
  for (const auto& e : head->entries) {
    if (e.key == "name") {
      sc.name = e.value;
    } else if (e.key == "description") {
      sc.description = e.value.size() >= 2 && e.value.front() == '"' ? r.quoted(e) : e.value;
    } else if (e.key == "chart") {
      chart_ref = &e;
    } else if (e.key == "gauge") {
      gauge = &e;
    } else {
      r.fail(e.line, "unknown key '" + e.key + "' in [scenario]");
    }
  }
  if (sc.name.empty()) r.fail(head->line, "[scenario] needs 'name'");

  const Section* chart_section = r.find("chart");
  if (chart_ref && chart_section) r.fail(chart_ref->line, "give either 'chart' or a [chart] section");
  if (chart_section) {
    sc.chart = inline_chart(r, *chart_section);
  } else if (chart_ref) {
    try {
      sc.chart = builtin_chart(chart_ref->value);
    } catch (const std::out_of_range&) {
      r.semantic(chart_ref->line, "unknown chart '" + chart_ref->value + "'");
    }
  } else {
    sc.chart = builtin_chart("cartesian");
  }
  const CoordinateNames& coords = sc.chart.coordinates;

  std::set<std::string> param_names;
  if (const Section* s = r.find("params")) {
    for (const auto& e : s->entries) {
      if (!is_identifier(e.key) || reserved_names().count(e.key))
        r.fail(e.line, "'" + e.key + "' is not a usable parameter name");
      if (axis_of(coords, e.key) >= 0) r.semantic(e.line, "parameter '" + e.key + "' shadows a coordinate");
      sc.params[e.key] = r.number(e, e.value);
      param_names.insert(e.key);
    }
  }

  if (gauge) sc.gauge = r.expression(*gauge, coords, param_names);

  if (const Section* s = r.find("prepotentials")) {
    for (const auto& e : s->entries) {
      if (!is_identifier(e.key)) r.fail(e.line, "'" + e.key + "' is not a valid pre-potential name");
      sc.prepotentials.push_back({e.key, r.expression(e, coords, param_names)});
    }
  }

  auto lookup = [&](const Entry& e, const std::string& name) -> const Prepotential& {
    for (const auto& u : sc.prepotentials) {
      if (u.name == name) return u;
    }
    r.semantic(e.line, "undefined pre-potential '" + name + "'");
  };
  auto pair_of = [&](const Entry& e) {
    const auto names = r.list(e);
    if (names.size() != 2)
      r.semantic(e.line, "'" + e.key + "' must name exactly two pre-potentials, got " +
                             std::to_string(names.size()));
    return PrepotentialPair{lookup(e, names[0]), lookup(e, names[1])};
  };

  if (const Section* s = r.find("pairs")) {
    for (const auto& e : s->entries) sc.pairs.push_back(pair_of(e));
  }

  if (const Section* s = r.find("rarita_schwinger")) {
    const Entry* u = nullptr;
    const Entry* column = nullptr;
    for (const auto& e : s->entries) {
      if (e.key == "u") {
        u = &e;
      } else if (e.key == "column") {
        column = &e;
      } else {
        r.fail(e.line, "unknown key '" + e.key + "' in [rarita_schwinger]");
      }
    }
    if (!u || !column) r.fail(s->line, "[rarita_schwinger] needs 'u' and 'column'");
    RaritaSchwingerBlock block{lookup(*u, u->value), {}};
    const auto names = r.list(*column);
    if (names.size() != 4) r.semantic(column->line, "'column' must name four pre-potentials");
    for (int k = 0; k < 4; ++k) block.column[k] = lookup(*column, names[k]);
    sc.rarita_schwinger = std::move(block);
  }

  if (const Section* s = r.find("dirac_column")) {
    std::array<std::optional<PrepotentialPair>, 4> slots;
    for (const auto& e : s->entries) {
      const std::array<const char*, 4> keys = {"psi1", "psi2", "psi3", "psi4"};
      const auto it = std::find(keys.begin(), keys.end(), e.key);
      if (it == keys.end()) r.fail(e.line, "unknown key '" + e.key + "' in [dirac_column]");
      slots[static_cast<std::size_t>(it - keys.begin())] = pair_of(e);
    }
    std::array<PrepotentialPair, 4> column;
    for (int k = 0; k < 4; ++k) {
      if (!slots[k]) r.semantic(s->line, "[dirac_column] needs psi1 to psi4");
      column[k] = *slots[k];
    }
    sc.dirac_column = column;
  }

  std::size_t checks_line = 1;
  if (const Section* s = r.find("checks")) {
    checks_line = s->line;
    for (const auto& e : s->entries) {
      if (e.key == "sectors") {
        for (const auto& name : r.list(e)) {
          const auto sector = parse_sector(name);
          if (!sector) r.semantic(e.line, "unknown sector '" + name + "'");
          if (std::find(sc.sectors.begin(), sc.sectors.end(), *sector) == sc.sectors.end())
            sc.sectors.push_back(*sector);
        }
      } else if (e.key == "conditions") {
        for (const auto& name : r.list(e)) {
          const auto cond = parse_condition(name);
          if (!cond) r.semantic(e.line, "unknown condition '" + name + "'");
          if (std::find(sc.conditions.begin(), sc.conditions.end(), *cond) == sc.conditions.end())
            sc.conditions.push_back(*cond);
        }
      } else if (e.key == "tolerance") {
        sc.tolerances.relative = r.number(e, e.value);
      } else if (e.key == "einstein_tolerance") {
        sc.tolerances.einstein = r.number(e, e.value);
      } else if (e.key == "nonflat") {
        sc.nonflat = r.boolean(e);
      } else if (e.key == "nonflat_floor") {
        sc.tolerances.nonflat_floor = r.number(e, e.value);
      } else if (e.key == "independence_floor") {
        sc.tolerances.independence_floor = r.number(e, e.value);
      } else {
        r.fail(e.line, "unknown key '" + e.key + "' in [checks]");
      }
    }
  }

  sc.sampling.box = sc.chart.default_box;
  if (const Section* s = r.find("sampling")) {
    for (const auto& e : s->entries) {
      if (e.key == "count") {
        sc.sampling.count = static_cast<std::size_t>(r.integer(e));
        if (sc.sampling.count == 0) r.semantic(e.line, "count must be positive");
      } else if (e.key == "seed") {
        sc.sampling.seed = r.integer(e);
      } else if (e.key == "admit") {
        sc.sampling.admit = r.expression(e, coords, param_names);
      } else if (e.key.rfind("box.", 0) == 0) {
        const int a = axis_of(coords, std::string_view(e.key).substr(4));
        if (a < 0) r.semantic(e.line, "box for unknown coordinate in '" + e.key + "'");
        const auto bounds = r.list(e);
        if (bounds.size() != 2) r.fail(e.line, "a box is 'lo, hi'");
        const Interval iv{r.number(e, bounds[0]), r.number(e, bounds[1])};
        if (!(iv.lo < iv.hi)) r.semantic(e.line, "empty box interval for '" + coords[a] + "'");
        sc.sampling.box[a] = iv;
      } else {
        r.fail(e.line, "unknown key '" + e.key + "' in [sampling]");
      }
    }
  }

  for (const Sector sector : sc.sectors) {
    if (needs_minkowski(sector) && !is_minkowski(sc.chart, sc.params))
      r.semantic(checks_line, std::string("sector ") + to_string(sector) +
                                  " needs the constant diag(1,-1,-1,-1) metric");
    if (sector == Sector::rarita_schwinger && !sc.rarita_schwinger)
      r.semantic(checks_line, "sector rarita_schwinger needs a [rarita_schwinger] section");
    if (sector == Sector::dirac_products && !sc.dirac_column)
      r.semantic(checks_line, "sector dirac_products needs a [dirac_column] section");
    const bool needs_pairs = sector != Sector::rarita_schwinger &&
                             sector != Sector::dirac_products && sector != Sector::full_einstein;
    if (needs_pairs && sc.pairs.empty())
      r.semantic(checks_line, std::string("sector ") + to_string(sector) + " needs at least one pair");
  }
  for (const Condition c : sc.conditions) {
    if (c == Condition::independence && sc.pairs.size() < 2)
      r.semantic(checks_line, "condition independence needs two pairs (four pre-potentials)");
    if (c != Condition::dalembert && c != Condition::independence && sc.pairs.empty())
      r.semantic(checks_line, std::string("condition ") + to_string(c) + " needs at least one pair");
  }
  if (sc.nonflat && std::find(sc.sectors.begin(), sc.sectors.end(), Sector::full_einstein) ==
                        sc.sectors.end())
    r.semantic(checks_line, "nonflat needs the full_einstein sector");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ScenarioError::Kind::io, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ScenarioError(ScenarioError::Kind::io, "error reading '" + path.string() + "'");
  return parse_scenario(buffer.str(), path.string());
}

std::vector<Point> sample_points(const Scenario& s) {
  std::mt19937_64 rng(s.sampling.seed);
  const auto uniform = [&rng](const Interval& iv) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return iv.lo + (iv.hi - iv.lo) * u;
  };
  std::vector<Point> points;
  points.reserve(s.sampling.count);
  const std::size_t cap = 100 * s.sampling.count;
  std::size_t draws = 0;
  while (points.size() < s.sampling.count) {
    if (draws++ >= cap)
      throw ScenarioError(ScenarioError::Kind::sampling,
                          "sampling for '" + s.name + "' rejected too many points (" +
                              std::to_string(points.size()) + " of " +
                              std::to_string(s.sampling.count) + " after " + std::to_string(cap) +
                              " draws)");
    Point p{};
    for (int a = 0; a < kDim; ++a) p[a] = uniform(s.sampling.box[a]);
    bool ok = false;
    try {
      ok = is_admissible(s.chart, p, s.params) &&
           (!s.sampling.admit || eval_value(*s.sampling.admit, p, s.params).real() >= 0.0);
    } catch (const DomainError&) {
      ok = false;
    }
    if (ok) points.push_back(p);
  }
  return points;
}

std::vector<Scenario> catalog() {
  std::vector<Scenario> out;
  for (const auto& entry : catalog_sources()) out.push_back(parse_scenario(entry.text, entry.name + ".scn"));
  return out;
}

Scenario catalog_scenario(std::string_view name) {
  for (const auto& entry : catalog_sources()) {
    if (entry.name == name) return parse_scenario(entry.text, entry.name + ".scn");
  }
  throw std::out_of_range("no catalog scenario named '" + std::string(name) + "'");
}

}  // namespace prepot
