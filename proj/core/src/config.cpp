#include "ehsoc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ehsoc/errors.hpp"

namespace ehsoc {

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::solve, "solve"},
    {Experiment::evaluate, "evaluate"},
    {Experiment::sweep_emax, "sweep-emax"},
    {Experiment::simulate, "simulate"},
    {Experiment::figures_data, "figures-data"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
  return value;
}

double parse_real(std::string_view text, std::string_view key) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(value))
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + s + "'");
  return value;
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + std::string(key) + "' expects true or false, got '" + std::string(text) + "'");
}

std::vector<int> parse_int_list(std::string_view text, std::string_view key) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_integer<int>(trim(text.substr(0, comma)), key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("'" + std::string(key) + "' expects a comma separated list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"experiment", [](auto& c, auto v) { c.experiment = parse_experiment(v); }},
      {"beta_nl", [](auto& c, auto v) { c.beta_nl = parse_real(v, "beta_nl"); }},
      {"e_max", [](auto& c, auto v) { c.e_max = parse_integer<int>(v, "e_max"); }},
      {"b_max", [](auto& c, auto v) { c.b_max = parse_integer<int>(v, "b_max"); }},
      {"arrival_mean", [](auto& c, auto v) { c.arrival_mean = parse_real(v, "arrival_mean"); }},
      {"channel_mean", [](auto& c, auto v) { c.channel_mean = parse_real(v, "channel_mean"); }},
      {"h_max", [](auto& c, auto v) { c.h_max = parse_integer<int>(v, "h_max"); }},
      {"lambda_snr", [](auto& c, auto v) { c.lambda_snr = parse_real(v, "lambda_snr"); }},
      {"iota_steps", [](auto& c, auto v) { c.iota_steps = parse_integer<int>(v, "iota_steps"); }},
      {"iota_steps_full", [](auto& c, auto v) { c.iota_steps_full = parse_integer<int>(v, "iota_steps_full"); }},
      {"drain_mode",
       [](auto& c, auto v) {
         if (v == "linear")
           c.drain_mode = DrainMode::linear;
         else if (v == "literal")
           c.drain_mode = DrainMode::literal;
         else
           throw ConfigError("'drain_mode' must be linear or literal, got '" + std::string(v) + "'");
       }},
      {"integrator",
       [](auto& c, auto v) {
         if (v == "closed-form")
           c.integrator = SlotIntegrator::Method::closed_form_tanh;
         else if (v == "rk4")
           c.integrator = SlotIntegrator::Method::rk4;
         else
           throw ConfigError("'integrator' must be closed-form or rk4, got '" + std::string(v) + "'");
       }},
      {"rk4_steps", [](auto& c, auto v) { c.rk4_steps = parse_integer<int>(v, "rk4_steps"); }},
      {"solver_tol", [](auto& c, auto v) { c.solver_tol = parse_real(v, "solver_tol"); }},
      {"solver_max_iter", [](auto& c, auto v) { c.solver_max_iter = parse_integer<long>(v, "solver_max_iter"); }},
      {"sim_slots", [](auto& c, auto v) { c.sim_slots = parse_integer<long>(v, "sim_slots"); }},
      {"seed",
       [](auto& c, auto v) {
         c.seed = parse_integer<std::uint64_t>(v, "seed");
         c.seed_set = true;
       }},
      {"sim_replicas", [](auto& c, auto v) { c.sim_replicas = parse_integer<int>(v, "sim_replicas"); }},
      {"trace_every", [](auto& c, auto v) { c.trace_every = parse_integer<long>(v, "trace_every"); }},
      {"sweep_emax", [](auto& c, auto v) { c.sweep_emax = parse_int_list(v, "sweep_emax"); }},
      {"sweep_full_iota", [](auto& c, auto v) { c.sweep_full_iota = parse_bool(v, "sweep_full_iota"); }},
  };
  return table;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

template <typename T>
std::string str(T value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  for (const auto& [e, name] : kExperimentNames)
    if (e == experiment) return name;
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kExperimentNames)
    if (n == name) return e;
  throw ConfigError("unknown experiment '" + std::string(name) +
                    "' (expected solve, evaluate, sweep-emax, simulate or figures-data)");
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions options;
  options.tol = solver_tol;
  options.max_iter = solver_max_iter;
  return options;
}

void ExperimentConfig::validate() const {
  require(beta_nl > 1.0, "beta_nl must be greater than 1 (got " + str(beta_nl) + ")");
  require(e_max >= 1, "e_max must be at least 1 (got " + str(e_max) + ")");
  require(b_max >= 1, "b_max must be at least 1 (got " + str(b_max) + ")");
  require(arrival_mean > 0.0 && arrival_mean < b_max,
          "arrival_mean must lie strictly between 0 and b_max=" + str(b_max) + " (got " + str(arrival_mean) + ")");
  require(channel_mean > 0.0, "channel_mean must be positive (got " + str(channel_mean) + ")");
  require(h_max >= 1, "h_max must be at least 1 (got " + str(h_max) + ")");
  require(lambda_snr >= 0.0, "lambda_snr must be non-negative (got " + str(lambda_snr) + ")");
  require(iota_steps >= 1, "iota_steps must be at least 1 (got " + str(iota_steps) + ")");
  require(iota_steps_full >= 2, "iota_steps_full must be at least 2 so the grid reaches 1 (got " +
                                    str(iota_steps_full) + ")");
  require(rk4_steps >= 1, "rk4_steps must be at least 1 (got " + str(rk4_steps) + ")");
  require(solver_tol > 0.0, "solver_tol must be positive (got " + str(solver_tol) + ")");
  require(solver_max_iter >= 1, "solver_max_iter must be at least 1");
  require(sim_slots >= 1, "sim_slots must be at least 1 (got " + str(sim_slots) + ")");
  require(sim_replicas >= 1, "sim_replicas must be at least 1");
  require(trace_every >= 0, "trace_every must be >= 0 (0 disables the trace)");
  require(!sweep_emax.empty(), "sweep_emax must list at least one capacity");
  for (int e : sweep_emax) require(e >= 1, "sweep_emax entries must be at least 1 (got " + str(e) + ")");
  if (experiment == Experiment::simulate)
    require(seed_set, "the simulate experiment needs a seed: set 'seed = <n>' or pass --seed");
}

ExperimentConfig parse_config(std::istream& in, std::string_view source) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError(where + "missing value for '" + std::string(key) + "'");
    try {
      it->second(config, value);
    } catch (const ConfigError& err) {
      throw ConfigError(where + err.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

SystemModel make_system(const ExperimentConfig& config, int e_max, int iota_steps) {
  LossModel loss(config.beta_nl, e_max);
  SlotIntegrator integ;
  integ.method = config.integrator;
  integ.step_count = config.rk4_steps;
  integ.drain = config.drain_mode;
  return SystemModel{
      loss,
      integ,
      truncated_geometric(config.arrival_mean, config.b_max),
      discretized_exponential(config.channel_mean, config.h_max),
      RewardModel{config.lambda_snr},
      ActionGrid::uniform(iota_steps),
  };
}

}  // namespace ehsoc
