#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prepot/chart.hpp"
#include "prepot/prepotential.hpp"

namespace prepot {

enum class Sector {
  klein_gordon,
  dirac_products,
  dirac_maxwell,
  maxwell,
  rarita_schwinger,
  linearized_einstein,
  full_einstein
};

enum class Condition {
  dalembert,
  gradient_orthogonality,
  hessian,
  commutation,
  independence,
  disjoint_supports
};

const char* to_string(Sector s);
const char* to_string(Condition c);
std::optional<Sector> parse_sector(std::string_view name);
std::optional<Condition> parse_condition(std::string_view name);

/// Sectors built from gamma matrices or perturbations of eta.
bool needs_minkowski(Sector s);

struct RaritaSchwingerBlock {
  Prepotential u;
  std::array<Prepotential, 4> column;
};

struct SamplingPolicy {
  std::size_t count = 256;
  std::uint64_t seed = 42;
  std::array<Interval, kDim> box{};
  /// Points with re(admit) < 0 are rejected (in addition to the chart's own).
  std::optional<Expr> admit;
};

struct Scenario {
  std::string name;
  std::string description;
  Chart chart;
  ParamBinding params;
  std::vector<Prepotential> prepotentials;
  std::vector<PrepotentialPair> pairs;
  std::optional<Expr> gauge;
  std::optional<RaritaSchwingerBlock> rarita_schwinger;
  std::optional<std::array<PrepotentialPair, 4>> dirac_column;
  std::vector<Sector> sectors;
  std::vector<Condition> conditions;
  Tolerances tolerances;
  /// Require a Riemann certificate in the full_einstein sector.
  bool nonflat = false;
  SamplingPolicy sampling;

  const Prepotential& prepotential(std::string_view name) const;
};

/// Parse scenario text. `origin` prefixes error messages. Throws
/// ScenarioError (format or semantic).
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");

/// Read and parse a file. Throws ScenarioError (io, format or semantic).
Scenario load_scenario(const std::filesystem::path& path);

/// Uniform draw over bits: lo + (hi - lo) * (x >> 11) * 2^-53, x from
/// mt19937_64 seeded with `seed`. Coordinates are drawn in axis order.
/// Rejected points are redrawn; after 100 * count draws throws
/// ScenarioError(sampling).
std::vector<Point> sample_points(const Scenario& s);

struct CatalogEntry {
  std::string name;
  std::string text;
};

/// Shipped scenarios in their file form.
const std::vector<CatalogEntry>& catalog_sources();

/// Shipped scenarios, parsed.
std::vector<Scenario> catalog();

/// Throws std::out_of_range for an unknown name.
Scenario catalog_scenario(std::string_view name);

}  // namespace prepot
