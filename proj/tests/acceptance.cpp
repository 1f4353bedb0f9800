// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "json_schema.hpp"
#include "prepot/clifford.hpp"
#include "prepot/fields.hpp"
#include "prepot/oracle.hpp"
#include "prepot/runner.hpp"
#include "random_expr.hpp"

namespace {

using namespace prepot;
namespace fs = std::filesystem;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Pinned tolerances.
constexpr int kRandomExpressions = 200;
constexpr double kOracleLow = 1e-7;
constexpr double kOracleCubic = 1e-5;
constexpr double kOracleSeconds = 10.0;
constexpr int kBianchiPairs = 50;
constexpr int kBianchiPoints = 64;
constexpr double kBianchiTolerance = 8 * kEps;
constexpr double kSectorTolerance = 1e-9;
constexpr double kRegularityFraction = 0.95;
constexpr double kUnificationSeconds = 5.0;
constexpr double kRicciTolerance = 1e-8;
constexpr double kNonflatFloor = 1e-6;
constexpr double kNonflatFraction = 0.90;
constexpr double kEinsteinSeconds = 30.0;
constexpr double kGaugeTolerance = 8 * kEps;
constexpr std::size_t kPoints = 256;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const CheckRecord* find(const CheckReport& r, const std::string& id) {
  for (const auto& c : r.checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

Verdict ad_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const CoordinateNames coords = {"t", "x", "y", "z"};
  double low = 0.0, cubic = 0.0;
  for (int k = 0; k < kRandomExpressions; ++k) {
    const Analytic root = testing::kAllAnalytic[static_cast<std::size_t>(k) % testing::kAllAnalytic.size()];
    const Expr e = parse(testing::random_expression(rng, root), coords);
    const Point p = testing::random_point(rng);
    const Jet j = eval_jet(e, p, {});
    const ScalarField f = [&](const Point& q) { return eval_value(e, q, {}); };
    for (std::size_t s = 0; s < kJetSize; ++s) {
      const MultiIndex& m = jet_multi_index(s);
      const double err =
          oracle_relative_error(j.extract(m), finite_difference_oracle(f, p, m, default_oracle_step(m.degree())));
      (m.degree() == 3 ? cubic : low) = std::max(m.degree() == 3 ? cubic : low, err);
    }
  }
  const double t = seconds_since(t0);
  return {low <= kOracleLow && cubic <= kOracleCubic && t < kOracleSeconds,
          std::to_string(kRandomExpressions) + " expressions, worst degree<=2 " + fmt(low) + ", degree 3 " +
              fmt(cubic) + ", " + fmt(t) + " s"};
}

Verdict clifford_identity() {
  const auto& g = gamma_matrices_exact();
  constexpr std::array<long, 4> eta = {1, -1, -1, -1};
  int good = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) {
      const Mat4z a = g[mu] * g[nu] + g[nu] * g[mu];
      bool ok = true;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ok = ok && a[r][c] == GaussianInt{r == c && mu == nu ? 2 * eta[mu] : 0, 0};
      good += ok ? 1 : 0;
    }
  return {good == 10, std::to_string(good) + "/10 anticommutators exact"};
}

Verdict bianchi_identity() {
  std::mt19937_64 rng(77);
  const Chart& cart = builtin_chart("cartesian");
  double worst = 0.0;
  for (int k = 0; k < kBianchiPairs; ++k) {
    const std::vector<PrepotentialPair> pair = {
        {{"u", parse(testing::random_smooth(rng), cart.coordinates)},
         {"v", parse(testing::random_smooth(rng), cart.coordinates)}}};
    for (int n = 0; n < kBianchiPoints; ++n) {
      const PointContext ctx(cart, testing::random_point(rng), {});
      const ResidualSet r = bianchi_residual(ctx, pair);
      worst = std::max(worst, r.scale > 0 ? r.max_abs() / r.scale : r.max_abs());
    }
  }
  return {worst <= kBianchiTolerance,
          std::to_string(kBianchiPairs) + " pairs x " + std::to_string(kBianchiPoints) + " points, worst " +
              fmt(worst / kEps) + " eps"};
}

Verdict unification() {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario s = catalog_scenario("maxwell_sol");
  s.sampling.count = kPoints;
  const CheckReport r = run_scenario(s);
  const double t = seconds_since(t0);
  const std::set<std::string> sectors = {"klein_gordon", "dirac_products", "dirac_maxwell", "maxwell",
                                         "linearized_einstein"};
  std::set<std::string> seen;
  double worst = 0.0;
  bool ok = true;
  double regularity = 0.0;
  for (const auto& c : r.checks) {
    if (!sectors.count(c.sector)) continue;
    seen.insert(c.sector);
    ok = ok && c.pass && c.points == kPoints;
    if (c.lower_bound) continue;
    worst = std::max(worst, c.max_rel);
  }
  if (const CheckRecord* reg = find(r, "maxwell.regularity")) regularity = reg->pass_fraction;
  ok = ok && seen == sectors && worst <= kSectorTolerance && regularity >= kRegularityFraction &&
       t < kUnificationSeconds;
  return {ok, "5 sectors at " + std::to_string(kPoints) + " points, worst " + fmt(worst) + ", regularity at " +
                  fmt(100 * regularity) + "% of points, " + fmt(t) + " s"};
}

Verdict rarita_schwinger() {
  Scenario s = catalog_scenario("rs_sol");
  s.sampling.count = kPoints;
  const CheckReport r = run_scenario(s);
  bool ok = true;
  std::string detail;
  for (const char* block : {"dynamical", "gamma_trace", "divergence"}) {
    const CheckRecord* c = find(r, std::string("rarita_schwinger.") + block);
    const double rel = c ? c->max_rel : 1.0;
    ok = ok && c && c->points == kPoints && rel <= kSectorTolerance;
    detail += std::string(detail.empty() ? "" : ", ") + block + " " + fmt(rel);
  }
  return {ok, "rs_sol " + detail};
}

Verdict full_einstein() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const char* name : {"einstein_cartesian", "einstein_cartesian_alpha", "einstein_cylindrical",
                           "einstein_lightlike", "einstein_lightlike_cyl"}) {
    Scenario s = catalog_scenario(name);
    s.sampling.count = kPoints;
    s.tolerances.einstein = kRicciTolerance;
    s.tolerances.nonflat_floor = kNonflatFloor;
    const CheckReport r = run_scenario(s);
    const CheckRecord* ricci = find(r, "full_einstein.ricci");
    const CheckRecord* nonflat = find(r, "full_einstein.nonflat");
    const bool family = ricci && ricci->points == kPoints && ricci->max_rel <= kRicciTolerance && nonflat &&
                        nonflat->pass_fraction >= kNonflatFraction;
    ok = ok && family;
    detail += std::string(detail.empty() ? "" : "; ") + name + " ricci " + fmt(ricci ? ricci->max_rel : 1.0) +
              " nonflat " + fmt(nonflat ? 100 * nonflat->pass_fraction : 0.0) + "%";
  }
  const double t = seconds_since(t0);
  ok = ok && t < kEinsteinSeconds;
  return {ok, detail + "; " + fmt(t) + " s"};
}

Verdict negative_controls() {
  const std::vector<std::pair<std::string, std::string>> controls = {
      {"nonharmonic.scn", "dalembert:u2"},
      {"nonorthogonal.scn", "gradient_orthogonality:u,v"},
      {"broken_metric.scn", "full_einstein.ricci"}};
  bool ok = true;
  std::string detail;
  for (const auto& [file, id] : controls) {
    const CheckReport r = run_scenario(load_scenario(std::string(PREPOT_DATA_DIR) + "/negative/" + file));
    const CheckRecord* c = find(r, id);
    const bool hit = c && !c->pass && exit_code(r) == 1;
    ok = ok && hit;
    detail += std::string(detail.empty() ? "" : ", ") + file + (hit ? " -> " + id : " not caught");
  }
  return {ok, detail};
}

Verdict gauge_hook() {
  Scenario s = catalog_scenario("maxwell_sol");
  s.sampling.count = kPoints;
  const auto points = sample_points(s);
  const std::vector<std::optional<Expr>> gauges = {std::nullopt, parse("t^2", s.chart.coordinates),
                                                   parse("sin(t + y)", s.chart.coordinates)};
  double worst = 0.0;
  for (const Point& p : points) {
    const PointContext ctx(s.chart, p, s.params);
    const FieldStrength reference = field_from_potential(vector_potential(ctx, s.pairs, gauges[0]));
    for (const auto& g : gauges) {
      const ResidualSet direct = potential_consistency(ctx, s.pairs, g);
      worst = std::max(worst, direct.max_abs() / direct.scale);
      const FieldStrength f = field_from_potential(vector_potential(ctx, s.pairs, g));
      for (int m = 0; m < 4; ++m)
        for (int n = m + 1; n < 4; ++n)
          for (std::size_t c = 0; c < kJetSize; ++c) {
            const double scale = std::max(1.0, std::abs(reference.upper(m, n).coefficient(c)));
            worst = std::max(worst, std::abs(f.upper(m, n).coefficient(c) - reference.upper(m, n).coefficient(c)) / scale);
          }
    }
  }
  return {worst <= kGaugeTolerance, "lambda in {0, t^2, sin(t+y)} at " + std::to_string(points.size()) +
                                        " points, worst " + fmt(worst / kEps) + " eps"};
}

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "out.txt";
  const std::string cmd = std::string(PREPOT_CLI) + " " + args + " >" + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out, std::ios::binary);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1,
          std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>())};
}

Verdict cli_contract() {
  const fs::path dir = fs::temp_directory_path() / "prepot_acceptance";
  fs::create_directories(dir);
  const std::string data = PREPOT_DATA_DIR;
  const Run pass = cli("verify " + data + "/catalog/maxwell_sol.scn", dir);
  const Run fail = cli("verify " + data + "/negative/nonharmonic.scn", dir);
  const Run config = cli("verify " + data + "/catalog/absent.scn", dir);
  const Run io = cli("verify " + data + "/catalog/maxwell_sol.scn --out " + (dir / "x" / "y.json").string(), dir);
  const Run anomaly = cli("verify " + data + "/negative/anomaly.scn", dir);
  const bool codes = pass.code == 0 && fail.code == 1 && config.code == 2 && io.code == 2 && anomaly.code == 3;

  std::ifstream schema_in(data + "/report.schema.json");
  const nlohmann::json schema = nlohmann::json::parse(schema_in);
  std::size_t schema_errors = 0;
  for (const Run* r : {&pass, &fail, &anomaly}) {
    schema_errors += testing::validate_schema(schema, nlohmann::json::parse(r->out)).size();
  }

  const std::regex runtime("\"runtime_seconds\": [^\\n]*");
  const Run again = cli("verify " + data + "/catalog/maxwell_sol.scn --threads 2", dir);
  const bool deterministic = std::regex_replace(pass.out, runtime, "") == std::regex_replace(again.out, runtime, "");
  fs::remove_all(dir);
  return {codes && schema_errors == 0 && deterministic,
          "exit codes " + std::to_string(pass.code) + "/" + std::to_string(fail.code) + "/" +
              std::to_string(config.code) + "/" + std::to_string(io.code) + "/" + std::to_string(anomaly.code) +
              ", schema errors " + std::to_string(schema_errors) + ", deterministic " +
              (deterministic ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AD correctness", ad_correctness},
      {"Clifford identity", clifford_identity},
      {"Bianchi identity", bianchi_identity},
      {"Unification (maxwell_sol)", unification},
      {"Rarita-Schwinger (rs_sol)", rarita_schwinger},
      {"Full Einstein families", full_einstein},
      {"Negative controls", negative_controls},
      {"Gauge hook", gauge_hook},
      {"CLI contract", cli_contract},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
