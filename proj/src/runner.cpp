#include "prepot/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "prepot/error.hpp"
#include "prepot/fields.hpp"
#include "prepot/oracle.hpp"

namespace prepot {
namespace {

constexpr double kLowerFractionIndependence = 0.95;
constexpr double kLowerFractionNonflat = 0.90;

/// Per-point memo for quantities shared by several checks.
struct PointCache {
  std::optional<EinsteinEvaluation> einstein;
};

using Evaluator = std::function<ConditionResult(const PointContext&, PointCache&)>;

struct PlannedCheck {
  CheckRecord record;
  Evaluator eval;
};

class Planner {
 public:
  explicit Planner(const Scenario& s) : s_(s) {}

  std::vector<PlannedCheck> build() {
    for (const Condition c : s_.conditions) plan_condition(c);
    for (const Sector sector : s_.sectors) plan_sector(sector);
    return std::move(plan_);
  }

 private:
  void upper(std::string id, std::string sector, double bound, Evaluator eval) {
    CheckRecord r;
    r.id = std::move(id);
    r.sector = std::move(sector);
    r.bound = bound;
    plan_.push_back({std::move(r), std::move(eval)});
  }

  void lower(std::string id, std::string sector, double bound, double fraction, Evaluator eval) {
    CheckRecord r;
    r.id = std::move(id);
    r.sector = std::move(sector);
    r.lower_bound = true;
    r.bound = bound;
    r.required_fraction = fraction;
    plan_.push_back({std::move(r), std::move(eval)});
  }

  void plan_condition(Condition c) {
    const Tolerances tol = s_.tolerances;
    const std::string sector = "conditions";
    const auto pair_id = [](const char* what, const PrepotentialPair& p) {
      return std::string(what) + ":" + p.first.name + "," + p.second.name;
    };
    switch (c) {
      case Condition::dalembert:
        for (const auto& u : s_.prepotentials)
          upper("dalembert:" + u.name, sector, tol.relative,
                [u, tol](const PointContext& ctx, PointCache&) { return check_dalembert(ctx, u, tol); });
        break;
      case Condition::gradient_orthogonality:
        for (const auto& p : s_.pairs)
          upper(pair_id("gradient_orthogonality", p), sector, tol.relative,
                [p, tol](const PointContext& ctx, PointCache&) {
                  return check_gradient_orthogonality(ctx, p, tol);
                });
        break;
      case Condition::hessian:
        for (const auto& p : s_.pairs)
          upper(pair_id("hessian", p), sector, tol.relative,
                [p, tol](const PointContext& ctx, PointCache&) {
                  return check_hessian_conditions(ctx, p, tol);
                });
        break;
      case Condition::commutation:
        for (const auto& p : s_.pairs)
          upper(pair_id("commutation", p), sector, tol.relative,
                [p, tol](const PointContext& ctx, PointCache&) { return check_commutation(ctx, p, tol); });
        break;
      case Condition::independence: {
        const std::array<Prepotential, 4> us = {s_.pairs[0].first, s_.pairs[0].second,
                                                s_.pairs[1].first, s_.pairs[1].second};
        lower("independence:" + us[0].name + "," + us[1].name + "," + us[2].name + "," + us[3].name,
              sector, tol.independence_floor, kLowerFractionIndependence,
              [us, tol](const PointContext& ctx, PointCache&) {
                return check_independence(ctx, std::span<const Prepotential, 4>(us), tol);
              });
        break;
      }
      case Condition::disjoint_supports:
        for (const auto& p : s_.pairs)
          upper(pair_id("disjoint_supports", p), sector, 0.0,
                [p](const PointContext&, PointCache&) { return check_disjoint_supports(p); });
        break;
    }
  }

  void plan_sector(Sector sector) {
    const Tolerances tol = s_.tolerances;
    const std::string name = to_string(sector);
    const auto id = [&name](const char* what) { return name + "." + what; };
    const std::vector<PrepotentialPair> pairs = s_.pairs;
    const auto judge = [tol](const char* label, double bound) {
      return [tol, label, bound](const ResidualSet& r) { return assess(label, r, bound, tol); };
    };

    switch (sector) {
      case Sector::klein_gordon:
        upper(id("wave"), name, tol.relative, [pairs, j = judge("wave", tol.relative)](const PointContext& ctx, PointCache&) {
          return j(kg_residual(ctx, pairs));
        });
        break;
      case Sector::dirac_products: {
        const auto column = *s_.dirac_column;
        upper(id("dirac"), name, tol.relative,
              [column, j = judge("dirac", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(dirac_residual(build_dirac_from_products(ctx, column)));
              });
        break;
      }
      case Sector::dirac_maxwell:
        upper(id("dirac"), name, tol.relative,
              [pairs, j = judge("dirac", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(dirac_residual(build_dirac_from_maxwell(ctx, pairs)));
              });
        break;
      case Sector::maxwell: {
        const auto gauge = s_.gauge;
        upper(id("divergence"), name, tol.relative,
              [pairs, j = judge("divergence", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(maxwell_divergence_residual(build_F(ctx, pairs), ctx));
              });
        upper(id("bianchi"), name, tol.exact,
              [pairs, j = judge("bianchi", tol.exact)](const PointContext& ctx, PointCache&) {
                return j(bianchi_residual(ctx, pairs));
              });
        lower(id("regularity"), name, tol.independence_floor, kLowerFractionIndependence,
              [pairs, tol](const PointContext& ctx, PointCache&) {
                return regularity_check(build_F(ctx, pairs), tol);
              });
        upper(id("potential"), name, tol.exact,
              [pairs, gauge, j = judge("potential", tol.exact)](const PointContext& ctx, PointCache&) {
                return j(potential_consistency(ctx, pairs, gauge));
              });
        break;
      }
      case Sector::rarita_schwinger: {
        const RaritaSchwingerBlock rs = *s_.rarita_schwinger;
        const auto block = [rs, tol](const PointContext& ctx, ResidualSet RsResiduals::*member,
                                     const char* label) {
          const VectorSpinor psi = build_rs(ctx, rs.u, rs.column);
          return assess(label, rs_residuals(psi).*member, tol.relative, tol);
        };
        upper(id("dynamical"), name, tol.relative, [block](const PointContext& ctx, PointCache&) {
          return block(ctx, &RsResiduals::dynamical, "dynamical");
        });
        upper(id("gamma_trace"), name, tol.relative, [block](const PointContext& ctx, PointCache&) {
          return block(ctx, &RsResiduals::gamma_trace, "gamma_trace");
        });
        upper(id("divergence"), name, tol.relative, [block](const PointContext& ctx, PointCache&) {
          return block(ctx, &RsResiduals::divergence, "divergence");
        });
        upper(id("orthogonality"), name, tol.relative, [rs, tol](const PointContext& ctx, PointCache&) {
          ConditionResult worst;
          worst.pass = true;
          for (const auto& c : rs.column) {
            const ConditionResult r = check_gradient_orthogonality(ctx, {rs.u, c}, tol);
            if (!r.pass || r.max_rel > worst.max_rel || !std::isfinite(r.max_rel)) {
              const bool pass = worst.pass && r.pass;
              worst = r;
              worst.pass = pass;
            }
          }
          worst.name = "orthogonality";
          return worst;
        });
        break;
      }
      case Sector::linearized_einstein:
        upper(id("field_equation"), name, tol.relative,
              [pairs, j = judge("field_equation", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(linearized_einstein_residual(ctx, build_h(ctx, pairs)));
              });
        upper(id("trace"), name, tol.relative,
              [pairs, j = judge("trace", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(h_trace(ctx, build_h(ctx, pairs)));
              });
        upper(id("divergence"), name, tol.relative,
              [pairs, j = judge("divergence", tol.relative)](const PointContext& ctx, PointCache&) {
                return j(h_divergence(ctx, build_h(ctx, pairs)));
              });
        break;
      case Sector::full_einstein: {
        const auto evaluate = [pairs](const PointContext& ctx, PointCache& cache) -> const EinsteinEvaluation& {
          if (!cache.einstein) cache.einstein = einstein_vacuum(build_full_metric(ctx, pairs));
          return *cache.einstein;
        };
        upper(id("ricci"), name, tol.einstein,
              [evaluate, j = judge("ricci", tol.einstein)](const PointContext& ctx, PointCache& cache) {
                return j(evaluate(ctx, cache).ricci);
              });
        if (s_.nonflat)
          lower(id("nonflat"), name, tol.nonflat_floor, kLowerFractionNonflat,
                [evaluate, tol](const PointContext& ctx, PointCache& cache) {
                  const EinsteinEvaluation& e = evaluate(ctx, cache);
                  return assess_lower("nonflat", e.certificate, e.term_scale, tol.nonflat_floor);
                });
        break;
      }
    }
  }

  const Scenario& s_;
  std::vector<PlannedCheck> plan_;
};

bool finite(const ConditionResult& r) {
  return std::isfinite(r.max_abs) && std::isfinite(r.scale) && std::isfinite(r.max_rel);
}

std::vector<PointResult> evaluate_point(const Scenario& s, const std::vector<PlannedCheck>& plan,
                                        const Point& p) {
  const PointContext ctx(s.chart, p, s.params);
  PointCache cache;
  std::vector<PointResult> out(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    try {
      const ConditionResult r = plan[k].eval(ctx, cache);
      PointResult& pr = out[k];
      pr.residual = r.max_abs;
      pr.relative = r.max_rel;
      pr.pass = r.pass;
      pr.outcome = finite(r) ? Outcome::evaluated : Outcome::anomaly;
    } catch (const DomainError&) {
      out[k] = PointResult{};
    }
  }
  return out;
}

void aggregate(CheckRecord& rec, const std::vector<std::vector<PointResult>>& samples,
               std::size_t k) {
  std::size_t passes = 0;
  double sum = 0.0;
  rec.min_rel = std::numeric_limits<double>::infinity();
  for (const auto& row : samples) {
    const PointResult& pr = row[k];
    if (pr.outcome == Outcome::skipped) {
      ++rec.skipped;
      continue;
    }
    ++rec.points;
    if (pr.outcome == Outcome::anomaly) {
      ++rec.anomalies;
      continue;
    }
    rec.max_abs = std::max(rec.max_abs, pr.residual);
    rec.max_rel = std::max(rec.max_rel, pr.relative);
    rec.min_rel = std::min(rec.min_rel, pr.relative);
    sum += pr.relative;
    if (pr.pass) ++passes;
  }
  const std::size_t finite_points = rec.points - rec.anomalies;
  if (finite_points == 0) rec.min_rel = 0.0;
  rec.mean_rel = finite_points ? sum / static_cast<double>(finite_points) : 0.0;
  rec.pass_fraction = finite_points ? static_cast<double>(passes) / static_cast<double>(finite_points) : 0.0;
  const double total = static_cast<double>(samples.size());
  const bool coverage = static_cast<double>(rec.skipped) <= kMaxSkippedFraction * total;
  const bool enough =
      rec.lower_bound ? rec.pass_fraction >= rec.required_fraction : passes == finite_points;
  rec.pass = coverage && rec.anomalies == 0 && finite_points > 0 && enough;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

CheckReport run_scenario(const Scenario& s, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.scenario = s.name;
  report.seed = s.sampling.seed;
  report.chart = s.chart.name;
  report.coordinates = s.chart.coordinates;
  report.points = sample_points(s);

  const std::vector<PlannedCheck> plan = Planner(s).build();
  const std::size_t n = report.points.size();
  report.samples.assign(n, {});

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers)
            report.samples[i] = evaluate_point(s, plan, report.points[i]);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);

  report.overall_pass = true;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    CheckRecord rec = plan[k].record;
    aggregate(rec, report.samples, k);
    report.overall_pass = report.overall_pass && rec.pass;
    report.anomaly = report.anomaly || rec.anomalies > 0;
    report.checks.push_back(std::move(rec));
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void emit_report(const CheckReport& r, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::csv) {
    out << "point";
    for (const auto& c : r.coordinates) out << ',' << c;
    out << ",check,residual,relative\n";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      for (std::size_t k = 0; k < r.checks.size(); ++k) {
        const PointResult& pr = r.samples[i][k];
        if (pr.outcome == Outcome::skipped) continue;
        out << i;
        for (const double x : r.points[i]) out << ',' << format_double(x);
        out << ',' << r.checks[k].id << ',' << format_double(pr.residual) << ','
            << format_double(pr.relative) << '\n';
      }
    }
    return;
  }

  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"sector", c.sector},
                      {"points", c.points},
                      {"skipped", c.skipped},
                      {"max_abs", c.max_abs},
                      {"max_rel", c.max_rel},
                      {"mean_rel", c.mean_rel},
                      {"pass", c.pass},
                      {"kind", c.lower_bound ? "lower" : "upper"},
                      {"bound", c.bound},
                      {"required_fraction", c.required_fraction},
                      {"min_rel", c.min_rel},
                      {"pass_fraction", c.pass_fraction},
                      {"anomalies", c.anomalies}});
  }
  const nlohmann::ordered_json doc = {{"scenario", r.scenario},
                                      {"seed", r.seed},
                                      {"chart", r.chart},
                                      {"count", r.points.size()},
                                      {"checks", checks},
                                      {"overall_pass", r.overall_pass},
                                      {"anomaly", r.anomaly},
                                      {"runtime_seconds", r.runtime_seconds}};
  out << doc.dump(2) << '\n';
}

int exit_code(const CheckReport& r) {
  if (r.anomaly) return 3;
  return r.overall_pass ? 0 : 1;
}

}  // namespace prepot

namespace prepot {

std::vector<OracleAuditRow> oracle_audit(const Scenario& s, std::size_t max_points) {
  std::vector<Point> points = sample_points(s);
  if (points.size() > max_points) points.resize(max_points);
  std::vector<OracleAuditRow> rows;
  for (const auto& u : s.prepotentials) {
    OracleAuditRow row;
    row.prepotential = u.name;
    const ScalarField f = [&](const Point& p) { return eval_value(u.expr, p, s.params); };
    for (const Point& p : points) {
      try {
        const Jet j = eval_jet(u.expr, p, s.params);
        double low = 0.0;
        double cubic = 0.0;
        for (std::size_t slot = 0; slot < kJetSize; ++slot) {
          const MultiIndex& m = jet_multi_index(slot);
          const double err = oracle_relative_error(
              j.extract(m), finite_difference_oracle(f, p, m, default_oracle_step(m.degree())));
          double& worst = m.degree() == 3 ? cubic : low;
          worst = std::max(worst, err);
        }
        row.max_error_low = std::max(row.max_error_low, low);
        row.max_error_cubic = std::max(row.max_error_cubic, cubic);
        ++row.points;
      } catch (const DomainError&) {
        ++row.skipped;
      }
    }
    row.pass = row.points > 0 && row.max_error_low <= kOracleToleranceLow &&
               row.max_error_cubic <= kOracleToleranceCubic;
    rows.push_back(row);
  }
  return rows;
}

void emit_oracle_audit(const Scenario& s, const std::vector<OracleAuditRow>& rows,
                       std::ostream& out) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    list.push_back({{"prepotential", r.prepotential},
                    {"points", r.points},
                    {"skipped", r.skipped},
                    {"max_error_low", r.max_error_low},
                    {"max_error_cubic", r.max_error_cubic},
                    {"tolerance_low", kOracleToleranceLow},
                    {"tolerance_cubic", kOracleToleranceCubic},
                    {"pass", r.pass}});
  }
  const nlohmann::ordered_json doc = {
      {"scenario", s.name}, {"seed", s.sampling.seed}, {"prepotentials", list}, {"overall_pass", all}};
  out << doc.dump(2) << '\n';
}

}  // namespace prepot
