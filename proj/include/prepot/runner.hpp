#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "prepot/scenario.hpp"

namespace prepot {

/// Aggregated statistics for one check over all sample points.
struct CheckRecord {
  std::string id;
  /// A field sector name, or "conditions" for pre-potential checks.
  std::string sector;
  /// "upper": pass when every relative residual <= bound.
  /// "lower": pass when relative magnitude > bound at >= required_fraction.
  bool lower_bound = false;
  double bound = 0.0;
  double required_fraction = 1.0;

  std::size_t points = 0;
  std::size_t skipped = 0;
  std::size_t anomalies = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double min_rel = 0.0;
  double pass_fraction = 0.0;
  bool pass = false;
};

enum class Outcome : std::uint8_t { evaluated, skipped, anomaly };

/// One check at one point.
struct PointResult {
  Outcome outcome = Outcome::skipped;
  double residual = 0.0;
  double relative = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string chart;
  CoordinateNames coordinates;
  std::vector<Point> points;
  std::vector<CheckRecord> checks;
  /// samples[point][check], same check order as `checks`.
  std::vector<std::vector<PointResult>> samples;
  bool overall_pass = false;
  bool anomaly = false;
  double runtime_seconds = 0.0;
};

struct RunOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Evaluate every declared condition and sector at every sample point.
/// Throws ScenarioError(sampling) if the sampler hits its draw cap.
CheckReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// Fraction of points whose check must be skippable before a record fails.
inline constexpr double kMaxSkippedFraction = 0.10;

enum class ReportFormat { json, csv };

/// JSON: {scenario, seed, chart, count, checks: [...], overall_pass, anomaly,
/// runtime_seconds}. CSV: point index, coordinates, check id, residual,
/// relative, one row per evaluated (point, check).
void emit_report(const CheckReport& r, ReportFormat format, std::ostream& out);

/// 0 all pass, 1 a check failed, 3 a numeric anomaly occurred.
int exit_code(const CheckReport& r);

/// Agreement of one pre-potential's jet with finite differences.
struct OracleAuditRow {
  std::string prepotential;
  std::size_t points = 0;
  std::size_t skipped = 0;
  /// Worst oracle_relative_error over derivative degrees 0..2 and 3.
  double max_error_low = 0.0;
  double max_error_cubic = 0.0;
  bool pass = false;
};

inline constexpr double kOracleToleranceLow = 1e-7;
inline constexpr double kOracleToleranceCubic = 1e-5;

/// Compare all 35 jet derivatives of every pre-potential against
/// finite_difference_oracle at the first `max_points` sample points.
std::vector<OracleAuditRow> oracle_audit(const Scenario& s, std::size_t max_points = 8);

void emit_oracle_audit(const Scenario& s, const std::vector<OracleAuditRow>& rows,
                       std::ostream& out);

}  // namespace prepot
