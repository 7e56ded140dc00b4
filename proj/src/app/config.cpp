#include "salm/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "salm/errors.hpp"

namespace salm::app {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ConfigError(key, "expected a number, got '" + raw + "'");
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ConfigError(key, "expected an integer, got '" + raw + "'");
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw ConfigError(key, "expected a nonnegative integer, got '" + raw + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  for (const auto& s : split_list(raw)) out.push_back(to_double(key, s));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem",
       {"name", "dim", "noise_sigma", "gradient_bias", "num_curves", "nodes_per_curve",
        "kl_terms", "kl_eta", "perturbation_amplitude", "metric_c0", "volume_scale",
        "perimeter_scale", "volume_floor", "perimeter_cap", "normal_projection"}},
      {"auglag", {"gamma", "tau", "box_lower", "box_upper", "mu1", "lambda1"}},
      {"schedule", {"n1", "m1", "growth", "step_rule", "alpha", "step_scale", "constant_step"}},
      {"termination", {"r_tol", "k_max", "budget"}},
      {"run", {"seeds", "out", "record_timing", "write_steps"}},
  };
  return keys;
}

const std::set<std::string> kQuadraticKeys{"name", "dim", "noise_sigma", "gradient_bias"};

RunConfig from_tree(const pt::ptree& tree) {
  const auto& allowed = allowed_keys();
  for (const auto& [section, body] : tree) {
    const auto it = allowed.find(section);
    if (it == allowed.end()) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError(section, "keys must appear inside a section");
      }
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }

  RunConfig c;
  const PaperDefaults defaults = paper_defaults();
  c.seeds.assign(defaults.seeds.begin(), defaults.seeds.end());
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    auto child = tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!child) return std::nullopt;
    return child->data();
  };
  const auto d = [&](const std::string& s, const std::string& k, auto& field) {
    if (auto v = get(s, k)) field = to_double(s + "." + k, *v);
  };
  const auto i = [&](const std::string& s, const std::string& k, auto& field) {
    if (auto v = get(s, k)) field = static_cast<std::remove_reference_t<decltype(field)>>(to_int(s + "." + k, *v));
  };

  if (auto v = get("problem", "name")) c.problem = trim(*v);
  if (c.problem == "quadratic") {
    if (tree.get_child_optional("problem")) {
      for (const auto& [key, value] : tree.get_child("problem")) {
        if (!kQuadraticKeys.contains(key)) {
          throw ConfigError("problem." + key, "not a quadratic problem key");
        }
      }
    }
    i("problem", "dim", c.quadratic.dim);
    d("problem", "noise_sigma", c.quadratic.noise_sigma);
    d("problem", "gradient_bias", c.quadratic.gradient_bias);
  } else if (c.problem == "multishape") {
    for (const std::string k : {"dim", "noise_sigma", "gradient_bias"}) {
      if (get("problem", k)) throw ConfigError("problem." + k, "not a multishape problem key");
    }
    MultiShapeOptions& o = c.multishape;
    i("problem", "num_curves", o.num_curves);
    i("problem", "nodes_per_curve", o.nodes_per_curve);
    i("problem", "kl_terms", o.kl.num_terms);
    d("problem", "kl_eta", o.kl.eta);
    d("problem", "perturbation_amplitude", o.perturbation_amplitude);
    d("problem", "metric_c0", o.metric_c0);
    if (auto v = get("problem", "volume_scale")) o.volume_scale = to_doubles("problem.volume_scale", *v);
    if (auto v = get("problem", "perimeter_scale")) o.perimeter_scale = to_doubles("problem.perimeter_scale", *v);
    if (auto v = get("problem", "volume_floor")) o.volume_floor = to_doubles("problem.volume_floor", *v);
    if (auto v = get("problem", "perimeter_cap")) o.perimeter_cap = to_doubles("problem.perimeter_cap", *v);
    if (auto v = get("problem", "normal_projection")) o.normal_projection = to_bool("problem.normal_projection", *v);
  } else {
    throw ConfigError("problem.name", "unknown problem '" + c.problem + "'");
  }

  d("auglag", "gamma", c.auglag.gamma);
  d("auglag", "tau", c.auglag.tau);
  d("auglag", "box_lower", c.auglag.box_lower);
  d("auglag", "box_upper", c.auglag.box_upper);
  d("auglag", "mu1", c.auglag.mu1);
  if (auto v = get("auglag", "lambda1")) {
    const auto l = to_doubles("auglag.lambda1", *v);
    c.auglag.lambda1 = Eigen::Map<const Vector>(l.data(), static_cast<Eigen::Index>(l.size()));
  }

  i("schedule", "n1", c.schedule.n1);
  i("schedule", "m1", c.schedule.m1);
  if (auto v = get("schedule", "growth")) {
    const std::string g = trim(*v);
    if (g == "inverse_sqrt") c.schedule.growth = ScheduleGrowth::inverse_sqrt;
    else if (g == "constant") c.schedule.growth = ScheduleGrowth::constant;
    else throw ConfigError("schedule.growth", "expected inverse_sqrt or constant");
  }
  if (auto v = get("schedule", "step_rule")) {
    const std::string g = trim(*v);
    if (g == "lipschitz") c.schedule.step_rule = StepRule::lipschitz;
    else if (g == "inverse_penalty") c.schedule.step_rule = StepRule::inverse_penalty;
    else if (g == "constant") c.schedule.step_rule = StepRule::constant;
    else throw ConfigError("schedule.step_rule", "expected lipschitz, inverse_penalty or constant");
  }
  d("schedule", "alpha", c.schedule.alpha);
  d("schedule", "step_scale", c.schedule.step_scale);
  d("schedule", "constant_step", c.schedule.constant_step);

  d("termination", "r_tol", c.termination.r_tol);
  i("termination", "k_max", c.termination.k_max);
  i("termination", "budget", c.termination.sample_budget);

  if (auto v = get("run", "seeds")) {
    c.seeds.clear();
    for (const auto& s : split_list(*v)) c.seeds.push_back(to_uint("run.seeds", s));
    if (c.seeds.empty()) throw ConfigError("run.seeds", "needs at least one seed");
  }
  if (auto v = get("run", "out")) c.out_dir = trim(*v);
  if (auto v = get("run", "record_timing")) c.record_timing = to_bool("run.record_timing", *v);
  if (auto v = get("run", "write_steps")) c.write_steps = to_bool("run.write_steps", *v);

  // Range checks of the solver parameters, reported against the config keys.
  try {
    c.auglag.validate();
  } catch (const Error& e) {
    throw ConfigError("auglag", e.what());
  }
  try {
    c.schedule.validate();
  } catch (const Error& e) {
    throw ConfigError("schedule", e.what());
  }
  try {
    c.termination.validate();
  } catch (const Error& e) {
    throw ConfigError("termination", e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
  }
  return from_tree(tree);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ProblemDefinition make_problem(const RunConfig& config) {
  ProblemDefinition p;
  try {
    p = config.problem == "quadratic"
            ? quadratic_benchmark(config.quadratic.dim, config.quadratic.noise_sigma,
                                  config.quadratic.gradient_bias)
            : multishape_benchmark(config.multishape);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("problem", e.what());
  }
  const auto n = static_cast<Eigen::Index>(p.constraints->size());
  if (config.auglag.lambda1.size() != 0 && config.auglag.lambda1.size() != n) {
    throw ConfigError("auglag.lambda1", "needs one entry per constraint (" + std::to_string(n) + ")");
  }
  if (config.schedule.step_rule == StepRule::lipschitz && !p.lipschitz) {
    throw ConfigError("schedule.step_rule", "problem '" + p.name + "' provides no Lipschitz estimate");
  }
  return p;
}

std::string defaults_text() {
  const PaperDefaults d = paper_defaults();
  auto list = [](const auto& values) {
    std::ostringstream s;
    for (std::size_t i = 0; i < values.size(); ++i) s << (i ? ", " : "") << values[i];
    return s.str();
  };
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "[auglag]\n"
    << "mu1 = " << d.mu1 << "\n"
    << "gamma = " << d.gamma << "\n"
    << "tau = " << d.tau << "\n"
    << "lambda1 = " << d.lambda1 << "\n"
    << "box_lower = " << d.box_lower << "\n"
    << "box_upper = " << d.box_upper << "\n\n"
    << "[schedule]\n"
    << "n1 = " << d.n1 << "\n"
    << "m1 = " << d.m1 << "\n"
    << "growth = inverse_sqrt\n"
    << "step_rule = inverse_penalty\n"
    << "step_scale = " << d.step_scale << "\n\n"
    << "[problem]\n"
    << "name = multishape\n"
    << "kl_terms = " << d.kl_terms << "\n"
    << "kl_eta = " << d.kl_eta << "\n"
    << "volume_floor = " << list(d.volume_floors) << "\n"
    << "perimeter_cap = " << list(d.perimeter_caps) << "\n\n"
    << "[run]\n"
    << "seeds = " << list(d.seeds) << "\n";
  return s.str();
}

}  // namespace salm::app
