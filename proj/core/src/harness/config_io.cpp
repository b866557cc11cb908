#include "hetnet/harness/config_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet::harness {
namespace {

using nlohmann::json;

json parse_document(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, std::string("not valid JSON: ") + e.what());
  }
}

double number_field(const json& doc, const std::string& key, const std::string& prefix = {}) {
  const std::string field = prefix + key;
  if (!doc.contains(key)) {
    throw ConfigError(field, "required field is missing");
  }
  const auto& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError(field, "must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ConfigError(field, "must be finite");
  }
  return d;
}

std::optional<double> optional_number(const json& doc, const std::string& key, const std::string& prefix = {}) {
  if (!doc.contains(key)) {
    return std::nullopt;
  }
  return number_field(doc, key, prefix);
}

void validate_network(const NetworkConfig& net) {
  try {
    net.validate();
  } catch (const ParameterError& e) {
    // NetworkConfig messages start with the member name; map it to the config key
    const std::string message = e.what();
    const std::string member = message.substr(0, message.find(':'));
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"lambda_m", "density_mbs_per_km2"},     {"lambda_f", "density_fbs_per_km2"},
        {"lambda_d", "density_devices_per_km2"}, {"p_m", "power_mbs_dbm"},
        {"p_f", "power_fbs_dbm"},                {"p_d", "power_device_dbm"},
        {"alpha", "path_loss_exponent"},         {"noise", "noise_power_w"}};
    std::string field = member;
    for (const auto& [m, k] : keys) {
      if (m == member) {
        field = k;
      }
    }
    throw ConfigError(field, message.substr(message.find(':') + 2));
  }
}

McSettings parse_mc(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("monte_carlo", "must be an object");
  }
  McSettings mc;
  const std::string p = "monte_carlo.";
  if (auto v = optional_number(doc, "samples", p)) {
    if (*v < static_cast<double>(mc::kMinSamples) || std::floor(*v) != *v) {
      throw ConfigError(p + "samples", "must be an integer >= " + std::to_string(mc::kMinSamples));
    }
    mc.samples = static_cast<std::uint64_t>(*v);
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw ConfigError(p + "seed", "must be a non-negative integer");
    }
    mc.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) {
      throw ConfigError(p + "mode", "must be \"accurate\" or \"approx\"");
    }
    try {
      mc.mode = mc::parse_mode(doc.at("mode").get<std::string>());
    } catch (const ParameterError& e) {
      throw ConfigError(p + "mode", e.what());
    }
  }
  if (auto v = optional_number(doc, "window_factor", p)) {
    if (*v < mc::kAssociationWindowFactor) {
      throw ConfigError(p + "window_factor", "must be >= 5");
    }
    mc.window_factor = *v;
  }
  return mc;
}

RunConfig parse_run_object(const json& doc, const std::string& prefix) {
  if (!doc.is_object()) {
    throw ConfigError(prefix.empty() ? "config" : prefix.substr(0, prefix.size() - 1), "must be a JSON object");
  }
  RunConfig cfg;
  NetworkConfig& net = cfg.network;
  net.lambda_m = units::per_km2_to_per_m2(number_field(doc, "density_mbs_per_km2", prefix));
  net.lambda_f = units::per_km2_to_per_m2(number_field(doc, "density_fbs_per_km2", prefix));
  net.lambda_d = units::per_km2_to_per_m2(number_field(doc, "density_devices_per_km2", prefix));
  net.p_m = units::dbm_to_watts(number_field(doc, "power_mbs_dbm", prefix));
  net.p_f = units::dbm_to_watts(number_field(doc, "power_fbs_dbm", prefix));
  net.p_d = units::dbm_to_watts(number_field(doc, "power_device_dbm", prefix));
  net.alpha = number_field(doc, "path_loss_exponent", prefix);

  const bool has_w = doc.contains("noise_power_w");
  const bool has_dbm = doc.contains("noise_power_dbm");
  if (has_w == has_dbm) {
    throw ConfigError(prefix + "noise_power_w",
                      has_w ? "give either noise_power_w or noise_power_dbm, not both"
                            : "required field is missing (or noise_power_dbm)");
  }
  net.noise = has_w ? number_field(doc, "noise_power_w", prefix)
                    : units::dbm_to_watts(number_field(doc, "noise_power_dbm", prefix));

  if (auto v = optional_number(doc, "target_sinr_db", prefix)) {
    cfg.target_sinr_db = *v;
  }
  if (doc.contains("monte_carlo")) {
    cfg.monte_carlo = parse_mc(doc.at("monte_carlo"));
  }
  validate_network(net);
  return cfg;
}

std::vector<double> parse_grid(const json& g) {
  std::vector<double> grid;
  if (g.is_array()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) {
        throw ConfigError("grid[" + std::to_string(i) + "]", "must be a number");
      }
      grid.push_back(g[i].get<double>());
    }
  } else if (g.is_object()) {
    const double start = number_field(g, "start", "grid.");
    const double stop = number_field(g, "stop", "grid.");
    const double count_d = number_field(g, "count", "grid.");
    if (count_d < 1.0 || std::floor(count_d) != count_d) {
      throw ConfigError("grid.count", "must be a positive integer");
    }
    const auto count = static_cast<std::size_t>(count_d);
    const std::string spacing = g.value("spacing", std::string("linear"));
    if (spacing != "linear" && spacing != "log") {
      throw ConfigError("grid.spacing", "must be \"linear\" or \"log\"");
    }
    if (spacing == "log" && (start <= 0.0 || stop <= 0.0)) {
      throw ConfigError("grid.start", "log spacing needs positive bounds");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      grid.push_back(spacing == "log" ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                      : start + f * (stop - start));
    }
    // pin the end points exactly
    grid.front() = start;
    if (count > 1) {
      grid.back() = stop;
    }
  } else {
    throw ConfigError("grid", "must be an array or a {start, stop, count, spacing} object");
  }
  if (grid.empty()) {
    throw ConfigError("grid", "must not be empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw ConfigError("grid[" + std::to_string(i) + "]", "must be finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("grid", "values must be strictly increasing");
    }
  }
  return grid;
}

json describe_json(const RunConfig& cfg) {
  const NetworkConfig& n = cfg.network;
  json doc = {
      {"density_mbs_per_km2", units::per_m2_to_per_km2(n.lambda_m)},
      {"density_fbs_per_km2", units::per_m2_to_per_km2(n.lambda_f)},
      {"density_devices_per_km2", units::per_m2_to_per_km2(n.lambda_d)},
      {"power_mbs_dbm", units::watts_to_dbm(n.p_m)},
      {"power_fbs_dbm", units::watts_to_dbm(n.p_f)},
      {"power_device_dbm", units::watts_to_dbm(n.p_d)},
      {"path_loss_exponent", n.alpha},
      {"noise_power_w", n.noise},
      {"target_sinr_db", cfg.target_sinr_db},
  };
  if (cfg.monte_carlo) {
    doc["monte_carlo"] = {{"samples", cfg.monte_carlo->samples},
                          {"seed", cfg.monte_carlo->seed},
                          {"mode", mc::to_string(cfg.monte_carlo->mode)},
                          {"window_factor", cfg.monte_carlo->window_factor}};
  }
  return doc;
}

}  // namespace

mc::Options McSettings::options(mc::Scope scope) const {
  mc::Options o;
  o.samples = samples;
  o.seed = RngSeed{seed};
  o.mode = mode;
  o.scope = scope;
  o.window_factor = window_factor;
  return o;
}

std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::FemtoDensityRatio ? "femto_density_ratio" : "target_sinr_db";
}

RunConfig SweepSpec::point(std::size_t i) const {
  RunConfig cfg = base;
  if (variable == SweepVariable::FemtoDensityRatio) {
    cfg.network.lambda_f = grid.at(i) * cfg.network.lambda_m;
  } else {
    cfg.target_sinr_db = grid.at(i);
  }
  try {
    cfg.network.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("grid[" + std::to_string(i) + "]", e.what());
  }
  return cfg;
}

RunConfig parse_run_config(std::string_view text) { return parse_run_object(parse_document(text, "config"), ""); }

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_file(path)); }

SweepSpec parse_sweep(std::string_view text) {
  const json doc = parse_document(text, "sweep");
  if (!doc.is_object()) {
    throw ConfigError("sweep", "must be a JSON object");
  }
  if (!doc.contains("base")) {
    throw ConfigError("base", "required field is missing");
  }
  if (!doc.contains("variable")) {
    throw ConfigError("variable", "required field is missing");
  }
  if (!doc.contains("grid")) {
    throw ConfigError("grid", "required field is missing");
  }
  SweepSpec spec;
  spec.base = parse_run_object(doc.at("base"), "base.");
  const json& var = doc.at("variable");
  if (var == "femto_density_ratio") {
    spec.variable = SweepVariable::FemtoDensityRatio;
  } else if (var == "target_sinr_db") {
    spec.variable = SweepVariable::TargetSinrDb;
  } else {
    throw ConfigError("variable", "must be \"femto_density_ratio\" or \"target_sinr_db\"");
  }
  spec.grid = parse_grid(doc.at("grid"));
  if (spec.variable == SweepVariable::FemtoDensityRatio && spec.grid.front() < 0.0) {
    throw ConfigError("grid", "femto density ratios must be >= 0");
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    (void)spec.point(i);
  }
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) { return parse_sweep(read_file(path)); }

std::string describe(const RunConfig& cfg) { return describe_json(cfg).dump(); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed reading '" + path.string() + "'");
  }
  return buffer.str();
}

}  // namespace hetnet::harness
