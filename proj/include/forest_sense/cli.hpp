#pragma once

// Command-line front end: argument parsing (flags, JSON config, seed from the
// environment) and dispatch to the analytic, Monte Carlo and figure runners.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "forest_sense/analytic.hpp"
#include "forest_sense/experiments.hpp"
#include "forest_sense/montecarlo.hpp"
#include "forest_sense/table.hpp"

namespace forest_sense::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kIo = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& mc_kinds() {
  static const std::vector<std::string> kinds{"cdf", "nn", "sense", "void", "detect"};
  return kinds;
}

struct CliConfig {
  std::string command;
  std::string target;  // mc estimator or figure name
  double rd = 10.0;
  double m = 10.0;
  double rs = 1.0;
  double vf = 1.0;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::size_t grid_points = experiments::kDefaultGridPoints;
  std::size_t samples = experiments::kDefaultSamples;
  std::uint64_t seed = 0;
  std::size_t shards = std::max(1u, std::thread::hardware_concurrency());
  std::string out;  // empty: stdout
  std::string format = "csv";
  double total_area = 40.0;
  std::vector<double> m_list{5.0, 10.0, 20.0, 40.0};
  double t = 10.0;
  std::vector<double> rs_list{1.0, 2.0, 4.0};
};

namespace detail {

inline std::vector<double> parse_list(const nlohmann::json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(x.get<double>());
    return out;
  }
  std::stringstream ss(v.get<std::string>());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  return out;
}

inline std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(source + ": not an unsigned integer: '" + text + "'");
  }
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

inline std::string show(double v) { return table_io::format_number(v); }

inline void validate(const CliConfig& c) {
  require(std::isfinite(c.rd) && c.rd > 0.0, "--rd must be > 0 (got " + show(c.rd) + ")");
  require(std::isfinite(c.m) && c.m >= 0.0, "--m must be >= 0 (got " + show(c.m) + ")");
  require(std::isfinite(c.rs) && c.rs >= 0.0, "--rs must be >= 0 (got " + show(c.rs) + ")");
  require(std::isfinite(c.vf) && c.vf >= 0.0, "--vf must be >= 0 (got " + show(c.vf) + ")");
  require(c.grid_points >= 1, "--grid-points must be >= 1");
  require(c.samples >= 1, "--samples must be >= 1");
  require(c.shards >= 1, "--shards must be >= 1");
  require(c.format == "csv" || c.format == "json", "--format must be csv or json (got " + c.format + ")");
  if (c.grid_min) require(*c.grid_min >= 0.0, "--grid-min must be >= 0");
  if (c.grid_min && c.grid_max) {
    require(c.grid_points == 1 || *c.grid_max > *c.grid_min, "--grid-max must exceed --grid-min");
  }
  require(std::isfinite(c.total_area) && c.total_area >= 0.0, "--total-area must be >= 0");
  require(std::isfinite(c.t) && c.t >= 0.0, "--t must be >= 0");
  for (double v : c.m_list) require(v > 0.0, "--m-list entries must be > 0");
  for (std::size_t i = 1; i < c.m_list.size(); ++i) {
    require(c.m_list[i] > c.m_list[i - 1], "--m-list must be strictly increasing");
  }
  require(!c.m_list.empty(), "--m-list must not be empty");
  for (double v : c.rs_list) require(v >= 0.0, "--rs-list entries must be >= 0");
  require(!c.rs_list.empty(), "--rs-list must not be empty");
}

}  // namespace detail

/// Parses argv into a validated config. Explicit flags win over --config
/// values; FOREST_SENSE_SEED (env_seed) applies when neither sets a seed.
inline CliConfig parse_args(int argc, const char* const* argv,
                            const char* env_seed = std::getenv("FOREST_SENSE_SEED")) {
  CliConfig cfg;
  CLI::App app{"Coverage and detection analysis of random sensor networks in a circular forest",
               "forest_sense"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string seed_text;
  double grid_min = 0.0;
  double grid_max = 0.0;

  std::map<std::string, std::pair<CLI::Option*, std::function<void(const nlohmann::json&)>>> keys;
  const auto number = [&](const std::string& name, double& target, const std::string& help) {
    auto* opt = app.add_option("--" + name, target, help);
    keys[name] = {opt, [&target](const nlohmann::json& v) { target = v.get<double>(); }};
  };
  const auto count = [&](const std::string& name, std::size_t& target, const std::string& help) {
    auto* opt = app.add_option("--" + name, target, help);
    keys[name] = {opt, [&target](const nlohmann::json& v) {
                    const auto x = v.get<std::int64_t>();
                    if (x < 0) throw std::invalid_argument("negative");
                    target = static_cast<std::size_t>(x);
                  }};
  };
  const auto list = [&](const std::string& name, std::vector<double>& target, const std::string& help) {
    auto* opt = app.add_option("--" + name, target, help)->delimiter(',');
    keys[name] = {opt, [&target](const nlohmann::json& v) { target = detail::parse_list(v); }};
  };

  number("rd", cfg.rd, "forest radius r_d (default 10)");
  number("m", cfg.m, "mean number of sensors (default 10)");
  number("rs", cfg.rs, "sensing radius r_S (default 1)");
  number("vf", cfg.vf, "fire envelope speed v_F (default 1)");
  number("grid-min", grid_min, "first abscissa (default 0)");
  number("grid-max", grid_max, "last abscissa (default 2 r_d, or t with r_F(t) = 2 r_d)");
  count("grid-points", cfg.grid_points, "abscissa count (default 101)");
  count("samples", cfg.samples, "Monte Carlo realizations (default 100000)");
  count("shards", cfg.shards, "Monte Carlo worker threads");
  number("total-area", cfg.total_area, "tradeoff: fixed m pi r_S^2 (default 40)");
  number("t", cfg.t, "tradeoff: critical time (default 10)");
  list("m-list", cfg.m_list, "tradeoff: comma-separated mean sensor counts");
  list("rs-list", cfg.rs_list, "sweep-range: comma-separated sensing radii");

  auto* seed_opt = app.add_option("--seed", seed_text, "master seed (default $FOREST_SENSE_SEED or 0)");
  keys["seed"] = {seed_opt, [&seed_text](const nlohmann::json& v) {
                    seed_text = v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::uint64_t>());
                  }};
  auto* out_opt = app.add_option("--out", cfg.out, "output path (default stdout)");
  keys["out"] = {out_opt, [&cfg](const nlohmann::json& v) { cfg.out = v.get<std::string>(); }};
  auto* format_opt = app.add_option("--format", cfg.format, "csv or json (default csv)");
  keys["format"] = {format_opt, [&cfg](const nlohmann::json& v) { cfg.format = v.get<std::string>(); }};
  app.add_option("--config", config_path, "JSON object with the same keys as the flags");

  app.add_subcommand("cdf", "contact-distance CDF over an r grid");
  app.add_subcommand("bounds", "contact-distance CDF with its upper/lower/loose bounds");
  app.add_subcommand("sense", "event sensing probability and bounds over a t grid");
  app.add_subcommand("coverage", "coverage probability of a random point (t = 0)");
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimators: cdf, nn, sense, void, detect");
  mc_cmd->add_option("estimator", cfg.target, "which estimator")->required()->check(CLI::IsMember(mc_kinds()));
  app.add_subcommand("sweep-range", "sensing probability for each r_S in --rs-list");
  app.add_subcommand("tradeoff", "sensor count vs sensing range at fixed m pi r_S^2");
  auto* fig_cmd = app.add_subcommand("fig", "named figure preset");
  fig_cmd->add_option("name", cfg.target, "figure name")
      ->required()
      ->check(CLI::IsMember(experiments::figure_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("--config: cannot read '" + config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("--config: invalid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw UsageError("--config: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
      const auto it = keys.find(key);
      if (it == keys.end()) throw UsageError("--config: unknown key '" + key + "'");
      if (it->second.first->count() > 0) continue;
      try {
        it->second.second(value);
      } catch (const std::exception&) {
        throw UsageError("--" + key + ": invalid value in config: " + value.dump());
      }
      if (key == "grid-min") cfg.grid_min = grid_min;
      if (key == "grid-max") cfg.grid_max = grid_max;
    }
  }
  if (keys["grid-min"].first->count() > 0) cfg.grid_min = grid_min;
  if (keys["grid-max"].first->count() > 0) cfg.grid_max = grid_max;

  if (!seed_text.empty()) {
    cfg.seed = detail::parse_seed(seed_text, "--seed");
  } else if (env_seed != nullptr && *env_seed != '\0') {
    cfg.seed = detail::parse_seed(env_seed, "FOREST_SENSE_SEED");
  }

  detail::validate(cfg);
  return cfg;
}

namespace detail {

inline std::vector<double> grid(const CliConfig& c, double default_max) {
  return experiments::linspace(c.grid_min.value_or(0.0), c.grid_max.value_or(default_max),
                               c.grid_points);
}

inline std::vector<CurveTable> mc_tables(const CliConfig& c, const NetworkModel& net,
                                         const EventModel& ev, const mc::SeedSpec& seed) {
  if (c.target == "cdf") {
    const auto g = grid(c, 2.0 * c.rd);
    return {mc::empirical_contact_cdf(net, g, c.samples, seed).to_table("mc contact CDF", "r", "mc_cdf")};
  }
  if (c.target == "nn") {
    const auto g = grid(c, 2.0 * c.rd);
    return {mc::empirical_nn_cdf(net, g, c.samples, seed).to_table("mc nearest-neighbour CDF", "r", "nn_cdf")};
  }
  if (c.target == "sense") {
    const auto g = grid(c, experiments::default_t_max(net, ev));
    return {mc::empirical_sensing_prob(net, ev, g, c.samples, seed)
                .to_table("mc sensing probability", "t", "mc_sensing")};
  }
  if (c.target == "void") {
    const auto v = mc::empirical_void_fraction(net, c.samples, seed);
    CurveTable table("mc void fraction", {"m", "void_fraction", "void_fraction_std_error", "exact"});
    table.add_row({c.m, v.estimate, v.std_error, std::exp(-c.m)});
    return {table};
  }
  const auto times = mc::empirical_detection_time(net, ev, c.samples, seed);
  CurveTable table("mc detection time", {"realization", "detection_time"});
  for (std::size_t i = 0; i < times.size(); ++i) table.add_row({static_cast<double>(i), times[i]});
  return {table};
}

inline std::vector<CurveTable> build_tables(const CliConfig& c) {
  const NetworkModel net(c.rd, c.m, c.rs);
  const EventModel ev(c.vf);
  const mc::SeedSpec seed{c.seed, c.shards};
  const QuadratureSpec quad;

  if (c.command == "cdf" || c.command == "bounds") {
    const bool with_bounds = c.command == "bounds";
    CurveTable table(with_bounds ? "contact CDF bounds" : "contact CDF",
                     with_bounds ? std::vector<std::string>{"r", "contact_cdf", "upper", "upper_closed_form",
                                                            "lower", "loose_upper"}
                                 : std::vector<std::string>{"r", "contact_cdf"});
    for (double r : grid(c, 2.0 * c.rd)) {
      if (with_bounds) {
        table.add_row({r, analytic::contact_cdf(r, net, quad), analytic::contact_cdf_upper(r, net, quad),
                       analytic::contact_cdf_upper_closed_form(r, net), analytic::contact_cdf_lower(r, net),
                       analytic::contact_cdf_loose_upper(r, net)});
      } else {
        table.add_row({r, analytic::contact_cdf(r, net, quad)});
      }
    }
    return {table};
  }
  if (c.command == "sense") {
    CurveTable table("event sensing probability", {"t", "sensing_prob", "upper", "lower", "loose_upper"});
    for (double t : grid(c, experiments::default_t_max(net, ev))) {
      table.add_row({t, analytic::sensing_prob(t, net, ev, quad), analytic::sensing_prob_upper(t, net, ev, quad),
                     analytic::sensing_prob_lower(t, net, ev), analytic::sensing_prob_loose_upper(t, net, ev)});
    }
    return {table};
  }
  if (c.command == "coverage") {
    CurveTable table("coverage probability", {"rs", "coverage_prob"});
    table.add_row({c.rs, analytic::coverage_prob(net, quad)});
    return {table};
  }
  if (c.command == "mc") return mc_tables(c, net, ev, seed);

  const experiments::RunOptions opt{c.samples, seed, quad};
  if (c.command == "sweep-range") {
    const auto spec = experiments::make_spec(net, ev, grid(c, experiments::default_t_max(net, ev)), opt);
    return {experiments::run_range_sweep(spec, c.rs_list)};
  }
  if (c.command == "tradeoff") {
    const auto spec = experiments::make_spec(net, ev, {c.t}, opt);
    return {experiments::run_tradeoff(c.total_area, c.m_list, c.t, spec)};
  }
  return experiments::run_figure(c.target, opt);
}

}  // namespace detail

/// Runs a parsed command, writing tables to cfg.out or `out`. Returns an ExitCode.
inline int run(const CliConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::ostringstream buffer;
  try {
    const auto tables = detail::build_tables(cfg);
    if (cfg.format == "json") {
      table_io::write_json(buffer, tables);
    } else {
      table_io::write_csv(buffer, tables);
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  if (cfg.out.empty() || cfg.out == "-") {
    out << buffer.str();
    out.flush();
    return out ? kOk : kIo;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot open output '" << cfg.out << "'\n";
    return kIo;
  }
  file << buffer.str();
  file.close();
  if (!file) {
    err << "write failed for '" << cfg.out << "'\n";
    return kIo;
  }
  return kOk;
}

/// parse_args + run with the exit-status mapping used by the tool.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  CliConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }
  return run(cfg, out, err);
}

}  // namespace forest_sense::cli
