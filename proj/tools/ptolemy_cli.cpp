// Command-line harness: estimates Ptolemy constants of planar curves, runs
// eccentricity sweeps, checks the ellipse critical point, follows the
// rectangle's shrinking-gap family, and explores the open cases.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptolemy/analytic.hpp"
#include "ptolemy/curves.hpp"
#include "ptolemy/optimizer.hpp"
#include "ptolemy/ratio.hpp"
#include "ptolemy/textio.hpp"

using json = nlohmann::ordered_json;
using namespace ptolemy;

namespace {

json jnum(double v) { return json(round_sig10(v)); }

json jquad(const QuadParams& q) {
  return json::array({jnum(q.t[0]), jnum(q.t[1]), jnum(q.t[2]), jnum(q.t[3])});
}

json jmatrix(const Matrix4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(jnum(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

struct AnalyticColumns {
  std::optional<double> closed_form;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
};

// Closed form and proven bounds where the curve has them. The rectangle's
// piecewise constant is itself the known lower bound; no rectangle upper
// bound is implemented.
AnalyticColumns analytic_columns(const CurveSpec& curve) {
  AnalyticColumns cols;
  if (curve.kind() == CurveKind::Ellipse) {
    cols.closed_form = ellipse_constant(curve.eccentricity());
    const BoundPair bounds = ellipse_bounds(curve.eccentricity());
    cols.lower_bound = bounds.lower;
    cols.upper_bound = bounds.upper;
  } else if (curve.kind() == CurveKind::Rectangle) {
    cols.closed_form = rectangle_constant(curve.eccentricity());
    cols.lower_bound = cols.closed_form;
  }
  return cols;
}

json estimate_to_json(const CurveSpec& curve, const EstimateResult& result) {
  json out;
  out["curve"] = curve.to_string();
  out["value"] = jnum(result.value);
  out["argmax"] = jquad(result.argmax);
  out["status"] = to_string(result.status);
  out["grid_best"] = jnum(result.grid_best);
  out["refinements_run"] = result.refinements_run;
  if (result.extrapolation_detail) {
    const ExtrapolationDetail& d = *result.extrapolation_detail;
    json detail;
    detail["gap_sequence"] = json::array();
    detail["values"] = json::array();
    for (double g : d.gap_sequence) detail["gap_sequence"].push_back(jnum(g));
    for (double v : d.values) detail["values"].push_back(jnum(v));
    detail["extrapolated"] = jnum(d.extrapolated);
    detail["slope"] = jnum(d.slope);
    detail["fit_residual"] = jnum(d.fit_residual);
    out["extrapolation_detail"] = detail;
  }
  const AnalyticColumns cols = analytic_columns(curve);
  if (cols.closed_form) out["closed_form"] = jnum(*cols.closed_form);
  if (cols.lower_bound) out["lower_bound"] = jnum(*cols.lower_bound);
  if (cols.upper_bound) out["upper_bound"] = jnum(*cols.upper_bound);
  return out;
}

bool write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream file(out_path);
  if (!file) {
    std::cerr << "cannot write to '" << out_path << "'\n";
    return false;
  }
  file << text;
  return file.good();
}

struct SweepRow {
  std::string curve;
  std::optional<double> eps;
  EstimateResult est;
  AnalyticColumns cols;
  double seconds = 0.0;
  std::string note;
};

constexpr const char* kSweepHeader =
    "curve,eps,estimate,closed_form,lower_bound,upper_bound,abs_error,status,"
    "t1,t2,t3,t4,grid_best,seconds,note";

std::string opt_field(const std::optional<double>& v) {
  return v ? format_sig10(*v) : std::string{};
}

std::string row_to_csv(const SweepRow& row) {
  std::ostringstream line;
  line << row.curve << ',' << opt_field(row.eps) << ','
       << format_sig10(row.est.value) << ',' << opt_field(row.cols.closed_form)
       << ',' << opt_field(row.cols.lower_bound) << ','
       << opt_field(row.cols.upper_bound) << ',';
  if (row.cols.closed_form) {
    line << format_sig10(std::fabs(row.est.value - *row.cols.closed_form));
  }
  line << ',' << to_string(row.est.status);
  for (double t : row.est.argmax.t) line << ',' << format_sig10(t);
  line << ',' << format_sig10(row.est.grid_best) << ','
       << format_sig10(row.seconds) << ',' << row.note << '\n';
  return line.str();
}

json row_to_json(const SweepRow& row) {
  json out;
  out["curve"] = row.curve;
  out["eps"] = row.eps ? jnum(*row.eps) : json();
  out["estimate"] = jnum(row.est.value);
  out["closed_form"] = row.cols.closed_form ? jnum(*row.cols.closed_form) : json();
  out["lower_bound"] = row.cols.lower_bound ? jnum(*row.cols.lower_bound) : json();
  out["upper_bound"] = row.cols.upper_bound ? jnum(*row.cols.upper_bound) : json();
  out["abs_error"] = row.cols.closed_form
                         ? jnum(std::fabs(row.est.value - *row.cols.closed_form))
                         : json();
  out["status"] = to_string(row.est.status);
  out["t1"] = jnum(row.est.argmax.t[0]);
  out["t2"] = jnum(row.est.argmax.t[1]);
  out["t3"] = jnum(row.est.argmax.t[2]);
  out["t4"] = jnum(row.est.argmax.t[3]);
  out["grid_best"] = jnum(row.est.grid_best);
  out["seconds"] = jnum(row.seconds);
  out["note"] = row.note;
  return out;
}

SweepRow run_row(const CurveSpec& curve, const OptimizeOptions& opts) {
  SweepRow row;
  row.curve = curve.to_string();
  if (curve.kind() == CurveKind::Ellipse || curve.kind() == CurveKind::Rectangle) {
    row.eps = curve.eccentricity();
  }
  const auto start = std::chrono::steady_clock::now();
  row.est = estimate_ptolemy_constant(curve, opts);
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  row.cols = analytic_columns(curve);
  if (curve.kind() == CurveKind::Rectangle &&
      std::fabs(curve.eccentricity() - rectangle_transition_eps) <= 1e-6) {
    row.note = "branch_flat=" + format_sig10(std::numbers::sqrt2) +
               ";branch_steep=" +
               format_sig10(rectangle_steep_branch(curve.eccentricity()));
  }
  return row;
}

int cmd_estimate(const std::string& curve_text, const OptimizeOptions& opts,
                 const std::string& format, const std::string& out_path) {
  const CurveSpec curve = CurveSpec::parse(curve_text);
  std::string text;
  SweepRow row = run_row(curve, opts);
  if (format == "csv") {
    text = std::string(kSweepHeader) + "\n" + row_to_csv(row);
  } else {
    text = estimate_to_json(curve, row.est).dump(2) + "\n";
  }
  if (!write_output(text, out_path)) return 2;
  return row.est.refinements_run == 0 ? 3 : 0;
}

int cmd_sweep(const std::string& family, double eps_min, double eps_max,
              int steps, const OptimizeOptions& opts, const std::string& format,
              const std::string& out_path) {
  if (family != "ellipse" && family != "rectangle") {
    std::cerr << "sweep supports --curve ellipse or rectangle\n";
    return 2;
  }
  if (!(eps_min >= 0.0 && eps_min <= eps_max && eps_max < 1.0) || steps < 1) {
    std::cerr << "need 0 <= eps-min <= eps-max < 1 and steps >= 1\n";
    return 2;
  }

  std::vector<double> eps_values(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    eps_values[static_cast<std::size_t>(i)] =
        steps == 1 ? eps_min : eps_min + (eps_max - eps_min) * i / (steps - 1);
  }

  std::vector<SweepRow> rows(eps_values.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < steps; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const CurveSpec curve = family == "ellipse"
                                ? CurveSpec::ellipse(eps_values[idx])
                                : CurveSpec::rectangle(eps_values[idx]);
    rows[idx] = run_row(curve, opts);
  }

  std::ostringstream text;
  double max_abs_error = 0.0;
  text << kSweepHeader << '\n';
  for (const SweepRow& row : rows) {
    text << row_to_csv(row);
    if (row.cols.closed_form) {
      max_abs_error = std::max(max_abs_error,
                               std::fabs(row.est.value - *row.cols.closed_form));
    }
  }
  std::string payload = text.str();
  if (format == "json") {
    json arr = json::array();
    for (const SweepRow& row : rows) arr.push_back(row_to_json(row));
    payload = arr.dump(2) + "\n";
  }
  if (!write_output(payload, out_path)) return 2;
  std::cout << "max_abs_error: " << format_sig10(max_abs_error) << "\n";
  return 0;
}

int cmd_hessian(double eps, double step, const std::string& out_path) {
  const CurveSpec curve = CurveSpec::ellipse(eps);
  const QuadParams critical{{0.0, 0.25, 0.5, 0.75}};

  const Matrix4 closed = ellipse_hessian_closed_form(eps);
  const Matrix4 fd = hessian_fd(curve, critical, step);
  double max_diff = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      max_diff = std::max(max_diff, std::fabs(fd(i, j) - closed(i, j)));

  const auto grad = gradient_fd(curve, critical, step);
  double grad_norm = 0.0;
  for (double g : grad) grad_norm = std::max(grad_norm, std::fabs(g));

  json out;
  out["eps"] = jnum(eps);
  out["step"] = jnum(step);
  out["closed_form"] = jmatrix(closed);
  out["finite_difference"] = jmatrix(fd);
  out["max_diff"] = jnum(max_diff);
  out["gradient_norm"] = jnum(grad_norm);
  out["closed_form_classification"] = to_string(second_derivative_test(closed));
  out["finite_difference_classification"] = to_string(second_derivative_test(fd));
  return write_output(out.dump(2) + "\n", out_path) ? 0 : 2;
}

int cmd_limit(double eps, double delta_start, double factor, int count,
              const std::string& format, const std::string& out_path) {
  if (!(factor > 0.0 && factor < 1.0) || count < 1) {
    std::cerr << "need 0 < factor < 1 and count >= 1\n";
    return 2;
  }

  std::vector<double> deltas, ratios, gaps;
  double delta = delta_start;
  for (int i = 0; i < count; ++i, delta *= factor) {
    const double ratio = rectangle_limit_family(eps, delta);
    deltas.push_back(delta);
    ratios.push_back(ratio);
    gaps.push_back(std::fabs(ratio - std::numbers::sqrt2));
  }

  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (!(gaps[i] < gaps[i - 1])) monotone = false;
  }

  // convergence order: least-squares slope of log(gap) against log(delta)
  double order = 0.0;
  if (count >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (gaps[i] <= 0.0) continue;
      const double x = std::log(deltas[i]);
      const double y = std::log(gaps[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2) order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }

  std::string payload;
  if (format == "json") {
    json out;
    out["eps"] = jnum(eps);
    out["limit"] = jnum(std::numbers::sqrt2);
    json jrows = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      json r;
      r["delta"] = jnum(deltas[i]);
      r["ratio"] = jnum(ratios[i]);
      r["abs_gap"] = jnum(gaps[i]);
      jrows.push_back(r);
    }
    out["rows"] = jrows;
    out["monotone_decrease"] = monotone;
    out["fitted_order"] = jnum(order);
    payload = out.dump(2) + "\n";
  } else {
    std::ostringstream text;
    text << "delta,ratio,abs_gap\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      text << format_sig10(deltas[i]) << ',' << format_sig10(ratios[i]) << ','
           << format_sig10(gaps[i]) << '\n';
    }
    payload = text.str();
  }
  if (!write_output(payload, out_path)) return 2;
  std::cout << "# monotone_decrease=" << (monotone ? "yes" : "no")
            << " fitted_order=" << format_sig10(order) << "\n";
  return 0;
}

int cmd_open(const std::string& curve_text, int seed_count,
             const OptimizeOptions& base_opts, const std::string& out_path) {
  if (seed_count < 1) {
    std::cerr << "need seeds >= 1\n";
    return 2;
  }
  const CurveSpec curve = CurveSpec::parse(curve_text);

  std::vector<EstimateResult> results;
  json seeds = json::array();
  for (int i = 0; i < seed_count; ++i) {
    OptimizeOptions opts = base_opts;
    opts.rng_seed = base_opts.rng_seed + static_cast<std::uint64_t>(i);
    seeds.push_back(opts.rng_seed);
    results.push_back(estimate_ptolemy_constant(curve, opts));
  }

  double lo = results.front().value, hi = results.front().value;
  std::size_t best = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    lo = std::min(lo, results[i].value);
    hi = std::max(hi, results[i].value);
    if (results[i].value > results[best].value) best = i;
  }
  const double spread = hi - lo;

  json out;
  out["curve"] = curve.to_string();
  out["rng_seeds"] = seeds;
  out["grid_points"] = base_opts.grid_points;
  out["starts"] = base_opts.starts;
  json values = json::array(), statuses = json::array();
  for (const EstimateResult& r : results) {
    values.push_back(jnum(r.value));
    statuses.push_back(to_string(r.status));
  }
  out["values"] = values;
  out["statuses"] = statuses;
  out["spread"] = jnum(spread);
  out["best_value"] = jnum(results[best].value);
  out["best_argmax"] = jquad(results[best].argmax);
  out["unstable"] = spread > 1e-5;

  if (!write_output(out.dump(2) + "\n", out_path)) return 2;
  int failures = 0;
  for (const EstimateResult& r : results) {
    if (r.refinements_run == 0) ++failures;
  }
  return failures == seed_count ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ptolemy constant estimation for planar curves"};
  app.require_subcommand(1);

  OptimizeOptions opts;
  std::string format;  // per-subcommand default: sweep/limit csv, others json
  std::string out_path;
  app.add_option("--grid", opts.grid_points, "grid points per curve (>= 8)");
  app.add_option("--starts", opts.starts, "refined seeds per family");
  app.add_option("--tol", opts.value_tolerance, "refinement value tolerance");
  app.add_option("--seed", opts.rng_seed, "rng seed for random starts");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write output to this file");

  std::string curve_text;
  auto* estimate = app.add_subcommand("estimate", "estimate P(J) for one curve");
  estimate->fallthrough();
  estimate->add_option("--curve", curve_text, "curve, e.g. ellipse:0.8")
      ->required();

  std::string sweep_family;
  double eps_min = 0.0, eps_max = 0.0;
  int steps = 1;
  auto* sweep = app.add_subcommand("sweep", "eccentricity sweep to CSV");
  sweep->fallthrough();
  sweep->add_option("--curve", sweep_family, "curve family: ellipse|rectangle")
      ->required();
  sweep->add_option("--eps-min", eps_min)->required();
  sweep->add_option("--eps-max", eps_max)->required();
  sweep->add_option("--steps", steps)->required();

  double hess_eps = 0.0, hess_step = 1e-3;
  auto* hessian = app.add_subcommand(
      "hessian", "closed-form vs finite-difference Hessian at the critical tuple");
  hessian->fallthrough();
  hessian->add_option("--eps", hess_eps, "ellipse eccentricity")->required();
  hessian->add_option("--step", hess_step, "finite-difference step");

  double limit_eps = 0.0, delta_start = 0.1, limit_factor = 0.5;
  int limit_count = 10;
  auto* limit = app.add_subcommand(
      "limit", "rectangle shrinking-gap family, convergence to sqrt(2)");
  limit->fallthrough();
  limit->add_option("--eps", limit_eps, "rectangle eccentricity")->required();
  limit->add_option("--delta-start", delta_start);
  limit->add_option("--factor", limit_factor);
  limit->add_option("--count", limit_count);

  std::string open_curve;
  int open_seeds = 5;
  auto* open = app.add_subcommand("open", "multi-seed stability report");
  open->fallthrough();
  open->add_option("--curve", open_curve, "curve, e.g. polygon:6")->required();
  open->add_option("--seeds", open_seeds, "number of distinct rng seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(estimate)) {
      return cmd_estimate(curve_text, opts,
                          format.empty() ? "json" : format, out_path);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(sweep_family, eps_min, eps_max, steps, opts,
                       format.empty() ? "csv" : format, out_path);
    }
    if (app.got_subcommand(hessian)) {
      return cmd_hessian(hess_eps, hess_step, out_path);
    }
    if (app.got_subcommand(limit)) {
      return cmd_limit(limit_eps, delta_start, limit_factor, limit_count,
                       format.empty() ? "csv" : format, out_path);
    }
    if (app.got_subcommand(open)) {
      return cmd_open(open_curve, open_seeds, opts, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
