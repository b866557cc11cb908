#include "hetnet/harness/cli.hpp"

#include <CLI11.hpp>
#include <optional>
#include <ostream>

#include "hetnet/errors.hpp"
#include "hetnet/harness/config_io.hpp"
#include "hetnet/harness/experiments.hpp"
#include "hetnet/harness/results.hpp"

namespace hetnet::harness {
namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> mode;
  std::optional<double> window_factor;
  std::optional<double> gamma_db;
  std::optional<std::string> corrupt;

  [[nodiscard]] bool any_mc() const { return seed || samples || mode || window_factor; }
};

void add_common(CLI::App& cmd, Flags& f, bool config_required) {
  auto* config = cmd.add_option("--config", f.config, "JSON config file");
  if (config_required) {
    config->required();
  }
  cmd.add_option("--out", f.out, "output file (default: stdout)");
  cmd.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--seed", f.seed, "Monte Carlo seed");
  cmd.add_option("--samples", f.samples, "Monte Carlo realizations");
  cmd.add_option("--mode", f.mode, "UL interferer model: accurate or approx");
  cmd.add_option("--window-factor", f.window_factor, "interference window factor (>= 5)");
}

// Applies command-line Monte Carlo overrides; any of them turns Monte Carlo on.
void apply_mc_flags(RunConfig& cfg, const Flags& f) {
  if (!f.any_mc()) {
    return;
  }
  McSettings mc = cfg.monte_carlo.value_or(McSettings{});
  if (f.samples) {
    if (*f.samples < mc::kMinSamples) {
      throw ConfigError("samples", "must be >= " + std::to_string(mc::kMinSamples));
    }
    mc.samples = *f.samples;
  }
  if (f.seed) {
    mc.seed = *f.seed;
  }
  if (f.mode) {
    try {
      mc.mode = mc::parse_mode(*f.mode);
    } catch (const ParameterError& e) {
      throw ConfigError("mode", e.what());
    }
  }
  if (f.window_factor) {
    if (!(*f.window_factor >= mc::kAssociationWindowFactor)) {
      throw ConfigError("window-factor", "must be >= 5");
    }
    mc.window_factor = *f.window_factor;
  }
  cfg.monte_carlo = mc;
}

RunConfig resolve_run(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (f.gamma_db) {
    cfg.target_sinr_db = *f.gamma_db;
  }
  apply_mc_flags(cfg, f);
  return cfg;
}

void emit(const ResultTable& table, const Flags& f, std::ostream& out) {
  const std::string text = render(table, parse_format(f.format));
  if (f.out.empty()) {
    out << text;
  } else {
    write_atomically(f.out, text);
  }
}

int validate(const Flags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_run(f);
  ValidateOptions opts;
  if (cfg.monte_carlo) {
    opts.samples = cfg.monte_carlo->samples;
    opts.seed = cfg.monte_carlo->seed;
    opts.mode = cfg.monte_carlo->mode;
    opts.window_factor = cfg.monte_carlo->window_factor;
  }
  opts.corrupt_scalar = f.corrupt;
  ValidationResult result = run_validate(cfg, opts);
  ResultTable table = result.table();
  table.comments.insert(table.comments.begin(), {"hetnet validate", "config " + describe(cfg)});
  emit(table, f, out);
  if (!result.pass) {
    err << "validation failed:";
    for (const auto& name : result.offenders()) {
      err << ' ' << name;
    }
    err << '\n';
    return kExitValidationFailed;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Downlink/uplink decoupled access in two-tier networks", "hetnet"};
  app.require_subcommand(1);
  Flags f;
  auto* assoc = app.add_subcommand("assoc", "association probabilities and loads");
  auto* throughput = app.add_subcommand("throughput", "coverage, rates and UL gains at one target SINR");
  auto* sweep = app.add_subcommand("sweep", "sweep femto density ratio or target SINR");
  auto* check = app.add_subcommand("validate", "compare analytic scalars with Monte Carlo");
  add_common(*assoc, f, false);
  add_common(*throughput, f, false);
  add_common(*sweep, f, true);
  add_common(*check, f, false);
  for (auto* cmd : {throughput, check}) {
    cmd->add_option("--gamma-db", f.gamma_db, "target SINR in dB");
  }
  check->add_option("--corrupt-analytic", f.corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (assoc->parsed()) {
      emit(run_assoc(resolve_run(f)), f, out);
    } else if (throughput->parsed()) {
      emit(run_throughput(resolve_run(f)), f, out);
    } else if (sweep->parsed()) {
      SweepSpec spec = load_sweep(f.config);
      apply_mc_flags(spec.base, f);
      emit(run_sweep(spec), f, out);
    } else {
      return validate(f, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidationFailed;
  }
  return kExitOk;
}

}  // namespace hetnet::harness
