#include "salm/app/commands.hpp"

#include <fstream>
#include <string>

#include "json.hpp"
#include "salm/app/config.hpp"
#include "salm/app/csv_log.hpp"
#include "salm/cone.hpp"
#include "salm/diagnostics.hpp"
#include "salm/errors.hpp"

namespace salm::app {

using nlohmann::json;

namespace {

json to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

json summary_json(const RunConfig& config, const ProblemDefinition& problem, std::uint64_t seed,
                  const OuterResult& result) {
  json j;
  j["problem"] = config.problem;
  j["seed"] = seed;
  j["stop_reason"] = to_string(result.reason);
  j["abort_message"] = result.abort_message;
  j["iterations"] = result.records.size();
  j["samples_used"] = result.samples_used;
  j["final"] = {{"u", to_json(result.u)}, {"lambda", to_json(result.lambda)}, {"mu", result.mu}};

  const ConstraintSystem& c = *problem.constraints;
  const ConstraintVector h = c.value(result.u);
  j["constraint_values"] = to_json(h);
  j["max_constraint_violation"] = cone_distance(h, c.partition()) == 0.0
                                      ? 0.0
                                      : (h - project_onto_cone(h, c.partition())).lpNorm<Eigen::Infinity>();
  if (auto e0 = problem.objective->expectation(problem.initial_point)) {
    j["objective_initial"] = e0->value;
    j["objective_final"] = problem.objective->expectation(result.u)->value;
    const KktReport r = kkt_check(problem, result.u, result.lambda);
    j["kkt"] = {{"stationarity_norm", r.stationarity_norm},
                {"feasibility_norm", r.feasibility_norm},
                {"complementarity_max", r.complementarity_max},
                {"dual_violation_max", r.dual_violation_max}};
  }
  if (result.records.size() >= 3) {
    std::vector<double> rs;
    for (const RunRecord& rec : result.records) rs.push_back(rec.optimality_estimate);
    const RateEstimate est = estimate_rate(rs, std::min<std::size_t>(rs.size(), 5));
    j["rate"] = {{"ratio", est.ratio}, {"classification", to_string(est.classification)}};
  }
  return j;
}

void write_curves(const ProblemDefinition& problem, const Point& u, const std::string& stem,
                  const std::filesystem::path& dir) {
  const auto* shapes = dynamic_cast<const MultiShapeManifold*>(problem.manifold.get());
  if (!shapes) return;
  for (int i = 0; i < shapes->num_curves(); ++i) {
    write_curve_file(dir / (stem + "_curve_" + std::to_string(i + 1) + ".txt"),
                     shapes->curve_nodes(u, i));
  }
}

}  // namespace

int run_command(const RunOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig config;
  ProblemDefinition problem;
  try {
    config = load_config(options.config);
    if (options.seed) config.seeds = {*options.seed};
    if (options.out) config.out_dir = *options.out;
    if (options.budget) {
      config.termination.sample_budget = *options.budget;
      config.termination.validate();
    }
    problem = make_problem(config);
    problem.validate();
    std::filesystem::create_directories(config.out_dir);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  if (config.problem == "multishape") {
    const MultiShapeInfo info = multishape_info(config.multishape);
    for (std::size_t i = 0; i < info.targets.size(); ++i) {
      write_curve_file(config.out_dir / ("target_" + std::to_string(i + 1) + ".txt"),
                       info.targets[i]);
    }
  }

  int code = kExitOk;
  for (std::uint64_t seed : config.seeds) {
    const std::string stem = "seed_" + std::to_string(seed);
    std::ofstream csv(config.out_dir / (stem + ".csv"), std::ios::binary);
    std::ofstream steps;
    csv << kRunCsvHeader << '\n';
    if (config.write_steps) {
      steps.open(config.out_dir / (stem + "_steps.csv"), std::ios::binary);
      steps << kStepsCsvHeader << '\n';
    }
    std::string log_error;
    const OuterResult result = run_outer(
        problem, config.auglag, config.schedule, config.termination, seed,
        [&](const RunRecord& r) {
          if (!log_error.empty()) return;
          try {
            write_run_row(csv, r, config.record_timing);
            if (config.write_steps) write_steps_rows(steps, r);
          } catch (const Error& e) {
            log_error = e.what();
          }
        });
    csv.close();
    steps.close();
    write_curves(problem, problem.initial_point, stem + "_initial", config.out_dir);
    write_curves(problem, result.u, stem + "_final", config.out_dir);

    json summary = summary_json(config, problem, seed, result);
    if (!log_error.empty()) summary["log_error"] = log_error;
    std::ofstream(config.out_dir / (stem + "_summary.json"), std::ios::binary) << summary.dump(2) << '\n';

    out << "seed " << seed << ": " << to_string(result.reason) << " after "
        << result.records.size() << " iterations\n";
    if (result.reason == StopReason::numerical_abort || !log_error.empty()) {
      err << "seed " << seed << ": numerical abort: "
          << (log_error.empty() ? result.abort_message : log_error) << '\n';
      code = kExitNumericalAbort;
    }
  }
  return code;
}

int verify_command(const std::filesystem::path& config_path, std::ostream& out,
                   std::ostream& err) {
  RunConfig config;
  ProblemDefinition problem;
  try {
    config = load_config(config_path);
    problem = make_problem(config);
    problem.validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  VerifyOptions opts;
  // Shape points must stay simple polygons, so they move less.
  if (config.problem == "multishape") opts.spread = 0.01;
  std::vector<CheckResult> checks;
  try {
    checks = verify_problem(problem, config.seeds.front(), opts);
  } catch (const Error& e) {
    checks.push_back({"verify.exception", 0.0, 0.0, false, e.what()});
  }

  json report;
  report["problem"] = config.problem;
  bool ok = true;
  json list = json::array();
  for (const CheckResult& c : checks) {
    ok = ok && c.pass;
    json item{{"name", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    list.push_back(item);
  }
  report["checks"] = list;
  report["pass"] = ok;
  out << report.dump(2) << '\n';
  return ok ? kExitOk : kExitVerifyFailure;
}

int defaults_command(std::ostream& out) {
  out << defaults_text();
  return kExitOk;
}

}  // namespace salm::app
