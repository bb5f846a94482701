#include "advlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "advlab/errors.hpp"

namespace advlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& val) {
  double out = 0.0;
  const char* end = val.data() + val.size();
  auto [p, ec] = std::from_chars(val.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError("key '" + key + "': expected a number, got '" + val + "'");
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& val) {
  Int out = 0;
  const char* end = val.data() + val.size();
  auto [p, ec] = std::from_chars(val.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError("key '" + key + "': expected an integer, got '" + val +
                      "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& val) {
  std::vector<double> out;
  std::stringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

}  // namespace

const char* to_string(LambdaPolicy p) {
  switch (p) {
    case LambdaPolicy::zero: return "zero";
    case LambdaPolicy::fixed: return "fixed";
    case LambdaPolicy::best_by_population_risk: return "best_by_population_risk";
    case LambdaPolicy::cv_selected: return "cv_selected";
  }
  return "?";
}

const char* to_string(Theta0Mode m) {
  return m == Theta0Mode::spherical ? "spherical" : "ones";
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("key 'repeats': must be >= 1");
  if (n1 < 2) throw ConfigError("key 'n1': must be >= 2");
  if (d < 0) throw ConfigError("key 'd': must be >= 0");
  if (d == 0 && gamma_grid.empty())
    throw ConfigError("key 'gamma_grid': required when d is not set");
  if (eps_list.empty()) throw ConfigError("key 'eps_list': must be nonempty");
  if (sigma2 < 0.0) throw ConfigError("key 'sigma2': must be nonnegative");
  if (lambda_fixed < 0.0)
    throw ConfigError("key 'lambda_fixed': must be nonnegative");
  for (double g : gamma_grid)
    if (g <= 0.0) throw ConfigError("key 'gamma_grid': entries must be > 0");
  for (double e : eps_list)
    if (e < 0.0) throw ConfigError("key 'eps_list': entries must be >= 0");
  for (double l : lambda_grid)
    if (l < 0.0) throw ConfigError("key 'lambda_grid': entries must be >= 0");
}

std::vector<double> default_gamma_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95,
          1.05, 1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0};
}

void apply_override(ExperimentConfig& cfg, const std::string& kv) {
  const auto pos = kv.find('=');
  if (pos == std::string::npos)
    throw ConfigError("expected key=value, got '" + kv + "'");
  const std::string key = trim(kv.substr(0, pos));
  const std::string val = trim(kv.substr(pos + 1));
  if (key == "n1") cfg.n1 = parse_int<int>(key, val);
  else if (key == "d") cfg.d = parse_int<int>(key, val);
  else if (key == "gamma_grid") cfg.gamma_grid = parse_list(key, val);
  else if (key == "eps_list") cfg.eps_list = parse_list(key, val);
  else if (key == "lambda_grid") cfg.lambda_grid = parse_list(key, val);
  else if (key == "lambda_policy") {
    if (val == "zero") cfg.lambda_policy = LambdaPolicy::zero;
    else if (val == "fixed") cfg.lambda_policy = LambdaPolicy::fixed;
    else if (val == "best_by_population_risk")
      cfg.lambda_policy = LambdaPolicy::best_by_population_risk;
    else if (val == "cv_selected") cfg.lambda_policy = LambdaPolicy::cv_selected;
    else
      throw ConfigError("key 'lambda_policy': unknown value '" + val + "'");
  } else if (key == "lambda_fixed") cfg.lambda_fixed = parse_double(key, val);
  else if (key == "sigma2") cfg.sigma2 = parse_double(key, val);
  else if (key == "theta0_mode") {
    if (val == "spherical") cfg.theta0_mode = Theta0Mode::spherical;
    else if (val == "ones") cfg.theta0_mode = Theta0Mode::ones;
    else throw ConfigError("key 'theta0_mode': unknown value '" + val + "'");
  } else if (key == "repeats") cfg.repeats = parse_int<int>(key, val);
  else if (key == "master_seed")
    cfg.master_seed = parse_int<std::uint64_t>(key, val);
  else
    throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_override(cfg, line);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  out += "n1=" + std::to_string(cfg.n1) + "\n";
  out += "d=" + std::to_string(cfg.d) + "\n";
  out += "gamma_grid=" + format_list(cfg.gamma_grid) + "\n";
  out += "eps_list=" + format_list(cfg.eps_list) + "\n";
  out += "lambda_grid=" + format_list(cfg.lambda_grid) + "\n";
  out += std::string("lambda_policy=") + to_string(cfg.lambda_policy) + "\n";
  out += "lambda_fixed=" + format_double(cfg.lambda_fixed) + "\n";
  out += "sigma2=" + format_double(cfg.sigma2) + "\n";
  out += std::string("theta0_mode=") + to_string(cfg.theta0_mode) + "\n";
  out += "repeats=" + std::to_string(cfg.repeats) + "\n";
  out += "master_seed=" + std::to_string(cfg.master_seed) + "\n";
  return out;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  if (experiment == "fig-compare") {
    cfg.n1 = 100;
    cfg.gamma_grid = default_gamma_grid();
    cfg.eps_list = {0.3};
    cfg.lambda_policy = LambdaPolicy::zero;
    cfg.sigma2 = 1.0;
    cfg.theta0_mode = Theta0Mode::spherical;
    cfg.repeats = 100;
  } else if (experiment == "fig-theory") {
    cfg.n1 = 100;
    cfg.gamma_grid = default_gamma_grid();
    cfg.eps_list = {0.3};
    cfg.lambda_policy = LambdaPolicy::zero;
    cfg.sigma2 = 1.0;
    cfg.theta0_mode = Theta0Mode::spherical;
    cfg.repeats = 1;
  } else if (experiment == "fig-ridge") {
    cfg.n1 = 100;
    cfg.gamma_grid = default_gamma_grid();
    cfg.eps_list = {0.0, 0.3};
    cfg.lambda_policy = LambdaPolicy::best_by_population_risk;
    cfg.sigma2 = 1.0;
    cfg.theta0_mode = Theta0Mode::spherical;
    cfg.repeats = 50;
  } else if (experiment == "fig-lambda") {
    cfg.n1 = 50;
    cfg.d = 200;
    cfg.eps_list = {0.0, 0.3, 0.5};
    cfg.lambda_policy = LambdaPolicy::fixed;
    cfg.sigma2 = 0.01;
    cfg.theta0_mode = Theta0Mode::ones;
    cfg.repeats = 30;
  } else if (experiment == "table-cv") {
    cfg.n1 = 50;
    cfg.d = 200;
    cfg.eps_list = {0.3, 0.5, 0.7};
    cfg.lambda_policy = LambdaPolicy::cv_selected;
    cfg.sigma2 = 0.01;
    cfg.theta0_mode = Theta0Mode::ones;
    cfg.repeats = 30;
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  return cfg;
}

}  // namespace advlab
