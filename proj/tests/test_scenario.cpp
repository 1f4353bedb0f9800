#include <fstream>
#include <iterator>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "prepot/error.hpp"
#include "prepot/scenario.hpp"

namespace prepot {
namespace {

ScenarioError::Kind error_kind(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return ScenarioError::Kind::io;
}

constexpr const char* kMinimal = R"scn(
[scenario]
name = tiny
[prepotentials]
u1 = "t + x"
u2 = "y"
[pairs]
a = u1, u2
[checks]
sectors = maxwell
conditions = dalembert
)scn";

TEST(Load, CatalogMaxwellSol) {
  const Scenario s = load_scenario(PREPOT_DATA_DIR "/catalog/maxwell_sol.scn");
  EXPECT_EQ(s.name, "maxwell_sol");
  EXPECT_EQ(s.chart.name, "cartesian");
  EXPECT_EQ(s.prepotentials.size(), 4u);
  EXPECT_EQ(s.pairs.size(), 2u);
  EXPECT_EQ(s.sectors.size(), 5u);
  EXPECT_EQ(s.conditions.size(), 6u);
  EXPECT_TRUE(s.dirac_column.has_value());
  EXPECT_EQ(s.sampling.count, 256u);
  EXPECT_EQ(s.sampling.seed, 42u);
  EXPECT_EQ(s.pairs[0].first.name, "u1");
  EXPECT_EQ(s.pairs[1].second.name, "u4");
}

TEST(Load, Minimal) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.chart.name, "cartesian");
  EXPECT_EQ(s.sampling.count, 256u);
  EXPECT_EQ(s.tolerances.relative, 1e-9);
  EXPECT_EQ(s.sampling.box[0].lo, -1.0);
  EXPECT_EQ(s.sampling.box[3].hi, 1.0);
}

TEST(Load, Errors) {
  EXPECT_EQ(error_kind(""), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("# only a comment\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[pairs]\np = u1, u9\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[prepotentials]\nu = \"t\"\n[pairs]\np = u\n"),
            ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[bogus]\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\nname = b\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[scenario]\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[prepotentials]\nu = t\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[prepotentials]\nu = \"t ** 2\"\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\nchart = polar\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[checks]\nsectors = gravity\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\nchart = cylindrical\n[prepotentials]\nu = \"t\"\nv = \"z\"\n"
                       "[pairs]\np = u, v\n[checks]\nsectors = dirac_maxwell\n"),
            ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[checks]\nsectors = rarita_schwinger\n"),
            ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[checks]\nnonflat = true\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[sampling]\ncount = 0\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[sampling]\nbox.t = 1, -1\n"), ScenarioError::Kind::semantic);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[sampling]\nbox.t = 1\n"), ScenarioError::Kind::format);
  EXPECT_EQ(error_kind("[scenario]\nname = a\n[sampling]\ncount = many\n"), ScenarioError::Kind::format);
}

TEST(Load, FormatErrorsCarryLocation) {
  try {
    parse_scenario("[scenario]\nname = a\n[prepotentials]\nu = \"t + w\"\n", "bad.scn");
    FAIL();
  } catch (const ScenarioError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad.scn"), std::string::npos) << what;
    EXPECT_NE(what.find(":4"), std::string::npos) << what;
  }
}

TEST(Load, MissingFile) {
  try {
    load_scenario(PREPOT_DATA_DIR "/catalog/does_not_exist.scn");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.kind(), ScenarioError::Kind::io);
  }
}

TEST(Load, InlineChartAndParams) {
  const Scenario s = parse_scenario(R"scn(
[scenario]
name = polar_plane
gauge = "k*a"
[chart]
name = polar
coordinates = s, a, b, c   # comment after a list
metric.s.s = "1"
metric.a.a = "-1"
metric.b.b = "-a^2"
metric.c.c = "-1"
admit = "a - 0.1"
[params]
k = 2.5
[prepotentials]
f = "k*ln(a)"
g = "sin(c - s)"
[pairs]
p = g, f
[checks]
sectors = full_einstein
)scn");
  EXPECT_EQ(s.chart.name, "polar");
  EXPECT_EQ(s.chart.coordinates[1], "a");
  EXPECT_EQ(s.params.at("k"), 2.5);
  EXPECT_TRUE(s.gauge.has_value());
  EXPECT_FALSE(is_minkowski(s.chart, s.params));
  EXPECT_FALSE(is_admissible(s.chart, {0, 0.05, 0, 0}, s.params));
}

TEST(Sampling, Deterministic) {
  const Scenario s = parse_scenario(kMinimal);
  const auto a = sample_points(s);
  const auto b = sample_points(s);
  ASSERT_EQ(a.size(), 256u);
  EXPECT_EQ(a, b);
  Scenario other = s;
  other.sampling.seed = 43;
  EXPECT_NE(sample_points(other), a);
  for (const Point& p : a)
    for (double x : p) {
      EXPECT_GE(x, -1.0);
      EXPECT_LT(x, 1.0);
    }
}

TEST(Sampling, FirstPointIsFrozen) {
  // mt19937_64(42), top 53 bits, mapped to [-1, 1).
  const Scenario s = parse_scenario(kMinimal);
  std::mt19937_64 rng(42);
  Point want{};
  for (double& x : want) x = -1.0 + 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  EXPECT_EQ(sample_points(s).front(), want);
}

TEST(Sampling, CylindricalRespectsRMin) {
  Scenario s = catalog_scenario("einstein_cylindrical");
  s.sampling.box[1] = {-1.0, 1.0};
  for (const Point& p : sample_points(s)) EXPECT_GE(p[1], kDefaultRMin);
}

TEST(Sampling, CapOnAggressiveExclusion) {
  const std::string text = std::string(kMinimal) + "[sampling]\ncount = 16\nbox.x = 0, 0.05\nadmit = \"x - 0.1\"\n";
  const Scenario s = parse_scenario(text);
  try {
    sample_points(s);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.kind(), ScenarioError::Kind::sampling);
  }
}

TEST(Catalog, Contents) {
  const auto all = catalog();
  EXPECT_GE(all.size(), 7u);
  std::set<std::string> names;
  for (const Scenario& s : all) names.insert(s.name);
  for (const char* n : {"maxwell_sol", "rs_sol", "einstein_cartesian", "einstein_cartesian_alpha",
                        "einstein_cylindrical", "einstein_lightlike", "einstein_lightlike_cyl"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  EXPECT_THROW(catalog_scenario("nope"), std::out_of_range);
}

TEST(Catalog, CylindricalPrepotentials) {
  const Scenario s = catalog_scenario("einstein_cylindrical");
  const CoordinateNames& c = s.chart.coordinates;
  EXPECT_EQ(s.prepotential("U1").expr, parse("sin(z - t)", c));
  EXPECT_EQ(s.prepotential("U2").expr, parse("ln(r)", c));
  EXPECT_EQ(s.prepotential("U3").expr, parse("0", c));
  EXPECT_EQ(s.prepotential("U4").expr, parse("0", c));
  EXPECT_TRUE(s.nonflat);
}

TEST(Catalog, LightlikeCylindrical) {
  const Scenario s = catalog_scenario("einstein_lightlike_cyl");
  EXPECT_EQ(s.chart.name, "lightlike_cylindrical");
  EXPECT_EQ(s.params.at("A"), 1.0);
  EXPECT_EQ(s.params.at("m"), 3.0);
  EXPECT_EQ(s.params.at("w"), 2.0);
  const Expr want = parse("A*cosh(m*ln(r))*sin(m*theta)", s.chart.coordinates, {"A", "m", "w"});
  EXPECT_EQ(s.prepotential("U2").expr, want);
}

TEST(Catalog, SourcesMatchDataFiles) {
  for (const CatalogEntry& e : catalog_sources()) {
    std::ifstream in(std::string(PREPOT_DATA_DIR) + "/catalog/" + e.name + ".scn", std::ios::binary);
    ASSERT_TRUE(in) << e.name;
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(text, e.text) << e.name;
  }
}

}  // namespace
}  // namespace prepot
