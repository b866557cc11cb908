#include "hetnet/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "hetnet/errors.hpp"
#include "hetnet/units.hpp"

namespace hetnet::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kProbabilitySumTol = 1e-12;

bool is_association_scalar(const std::string& name) { return name.starts_with("p") || name.starts_with("a_"); }

double gamma_of(const RunConfig& cfg) { return units::db_to_linear(cfg.target_sinr_db); }

std::vector<std::string> provenance(const RunConfig& cfg, const std::string& command) {
  std::vector<std::string> lines = {"hetnet " + command, "config " + describe(cfg)};
  return lines;
}

// MC triplet columns for `names`, plus a status column.
void append_mc_columns(std::vector<std::string>& columns, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    columns.push_back("mc_" + n + "_mean");
    columns.push_back("mc_" + n + "_se");
    columns.push_back("mc_" + n + "_n");
  }
  columns.emplace_back("mc_status");
}

// Runs the Monte Carlo estimator and appends its cells; a failure marks the row instead of aborting.
void append_mc_cells(std::vector<Cell>& row, const RunConfig& cfg, mc::Scope scope,
                     const std::vector<std::string>& names) {
  std::string status = "ok";
  std::optional<mc::Report> report;
  try {
    report = mc::estimate(cfg.network, gamma_of(cfg), cfg.monte_carlo->options(scope));
  } catch (const std::exception& e) {
    status = std::string("failed: ") + e.what();
  }
  for (const auto& n : names) {
    if (report) {
      const McEstimate& est = report->at(n);
      row.emplace_back(est.mean);
      row.emplace_back(est.std_error);
      row.emplace_back(static_cast<double>(est.n_samples));
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN});
    }
  }
  row.emplace_back(status);
}

std::vector<std::string> names_of(const std::vector<NamedValue>& values) {
  std::vector<std::string> names;
  names.reserve(values.size());
  for (const auto& [n, v] : values) {
    names.push_back(n);
  }
  return names;
}

// Names the Monte Carlo report carries for a scope, in report order.
std::vector<std::string> mc_names(mc::Scope scope) {
  const std::vector<std::string> all = mc::scalar_names();
  if (scope != mc::Scope::Association) {
    return all;
  }
  std::vector<std::string> names;
  for (const auto& n : all) {
    if (is_association_scalar(n)) {
      names.push_back(n);
    }
  }
  return names;
}

std::vector<Cell> analytic_cells(const std::vector<NamedValue>& values) {
  std::vector<Cell> row;
  row.reserve(values.size());
  for (const auto& [n, v] : values) {
    row.emplace_back(v);
  }
  return row;
}

ResultTable assoc_table(const RunConfig& cfg, std::optional<std::pair<std::string, double>> swept) {
  const auto values = association_scalars(cfg.network);
  ResultTable table;
  if (swept) {
    table.columns.push_back(swept->first);
  }
  const auto names = names_of(values);
  table.columns.insert(table.columns.end(), names.begin(), names.end());
  std::vector<Cell> row;
  if (swept) {
    row.emplace_back(swept->second);
  }
  for (auto& c : analytic_cells(values)) {
    row.push_back(std::move(c));
  }
  if (cfg.monte_carlo) {
    const auto mc = mc_names(mc::Scope::Association);
    append_mc_columns(table.columns, mc);
    append_mc_cells(row, cfg, mc::Scope::Association, mc);
  }
  table.rows.push_back(std::move(row));
  return table;
}

ResultTable throughput_table(const RunConfig& cfg) {
  const auto values = analytic_scalars(analytic::evaluate(cfg.network, gamma_of(cfg)));
  ResultTable table;
  table.columns.emplace_back("target_sinr_db");
  const auto names = names_of(values);
  table.columns.insert(table.columns.end(), names.begin(), names.end());
  std::vector<Cell> row{cfg.target_sinr_db};
  for (auto& c : analytic_cells(values)) {
    row.push_back(std::move(c));
  }
  if (cfg.monte_carlo) {
    const auto mc = mc_names(mc::Scope::Full);
    append_mc_columns(table.columns, mc);
    append_mc_cells(row, cfg, mc::Scope::Full, mc);
  }
  table.rows.push_back(std::move(row));
  return table;
}

}  // namespace

std::vector<NamedValue> association_scalars(const NetworkConfig& cfg) {
  const auto cases = analytic::case_probabilities(cfg);
  const auto a = analytic::tier_association(cases);
  auto load = [&](double assoc, double density) {
    return density > 0.0 ? analytic::mean_load(cfg, assoc, density) : 0.0;
  };
  return {{"p1", cases.p1},
          {"p2", cases.p2},
          {"p3", cases.p3},
          {"p4", cases.p4},
          {"a_md", a.a_md},
          {"a_fd", a.a_fd},
          {"a_mu", a.a_mu},
          {"a_fu", a.a_fu},
          {"load_md", load(a.a_md, cfg.lambda_m)},
          {"load_fd", load(a.a_fd, cfg.lambda_f)},
          {"load_mu", load(a.a_mu, cfg.lambda_m)},
          {"load_fu", load(a.a_fu, cfg.lambda_f)}};
}

std::vector<NamedValue> analytic_scalars(const analytic::Report& r) {
  auto joint = [](const analytic::LinkThroughput& l) {
    double sum = 0.0;
    for (const auto* t : {&l.macro, &l.femto}) {
      if (t->association > 0.0) {
        sum += t->association * t->coverage;
      }
    }
    return sum;
  };
  std::vector<NamedValue> v = {
      {"p1", r.cases.p1},
      {"p2", r.cases.p2},
      {"p3", r.cases.p3},
      {"p4", r.cases.p4},
      {"a_md", r.association.a_md},
      {"a_fd", r.association.a_fd},
      {"a_mu", r.association.a_mu},
      {"a_fu", r.association.a_fu},
      {"load_md", r.load_md},
      {"load_fd", r.load_fd},
      {"load_mu", r.load_mu},
      {"load_fu", r.load_fu},
      {"kappa", r.kappa},
      {"cov_dl_m", r.dl.macro.coverage},
      {"cov_dl_f", r.dl.femto.coverage},
      {"cov_dl", joint(r.dl)},
      {"cov_ulc_m", r.ul_coupled.macro.coverage},
      {"cov_ulc_f", r.ul_coupled.femto.coverage},
      {"cov_ulc", joint(r.ul_coupled)},
      {"cov_uld_m", r.ul_decoupled.macro.coverage},
      {"cov_uld_f", r.ul_decoupled.femto.coverage},
      {"cov_uld", joint(r.ul_decoupled)},
      {"r_dl_m", r.dl.macro.rate},
      {"r_dl_f", r.dl.femto.rate},
      {"r_dl", r.dl.aggregate},
      {"r_dl_equivalent", r.dl.equivalent_aggregate},
      {"r_ulc_m", r.ul_coupled.macro.rate},
      {"r_ulc_f", r.ul_coupled.femto.rate},
      {"r_ul_coupled", r.ul_coupled.aggregate},
      {"r_uld_m", r.ul_decoupled.macro.rate},
      {"r_uld_f", r.ul_decoupled.femto.rate},
      {"r_ul_decoupled", r.ul_decoupled.aggregate},
      {"r_ul_decoupled_equivalent", r.ul_decoupled.equivalent_aggregate},
      {"eta_m", r.gains.eta_m},
      {"eta_f", r.gains.eta_f},
      {"eta_bar", r.gains.eta_bar},
  };
  for (std::size_t i = 0; i < 4; ++i) {
    v.emplace_back("eta_" + std::string(to_string(static_cast<AssociationCase>(i + 1))), r.gains.eta_case[i]);
  }
  return v;
}

ResultTable run_assoc(const RunConfig& cfg) {
  ResultTable table = assoc_table(cfg, std::nullopt);
  table.comments = provenance(cfg, "assoc");
  return table;
}

ResultTable run_throughput(const RunConfig& cfg) {
  ResultTable table = throughput_table(cfg);
  table.comments = provenance(cfg, "throughput");
  return table;
}

ResultTable run_sweep(const SweepSpec& spec) {
  ResultTable table;
  table.comments = provenance(spec.base, "sweep");
  table.comments.push_back("variable " + std::string(to_string(spec.variable)));
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const RunConfig point = spec.point(i);
    ResultTable one = spec.variable == SweepVariable::FemtoDensityRatio
                          ? assoc_table(point, std::make_pair(std::string(to_string(spec.variable)), spec.grid[i]))
                          : throughput_table(point);
    if (i == 0) {
      table.columns = one.columns;
    }
    table.rows.push_back(std::move(one.rows.front()));
  }
  return table;
}

ResultTable ValidationResult::table() const {
  ResultTable t;
  t.columns = {"scalar", "analytic", "mc_mean", "mc_se", "mc_n", "z", "status"};
  for (const auto& c : checks) {
    t.rows.push_back({c.name, c.analytic, c.mc.mean, c.mc.std_error, static_cast<double>(c.mc.n_samples), c.z,
                      std::string(c.pass ? "pass" : "FAIL")});
  }
  t.comments.push_back("probability_sum analytic " + format_number(analytic_probability_sum) + " mc " +
                       format_number(mc_probability_sum) + (probability_sums_ok ? " pass" : " FAIL"));
  t.comments.push_back(std::string("result ") + (pass ? "pass" : "FAIL"));
  return t;
}

std::vector<std::string> ValidationResult::offenders() const {
  std::vector<std::string> names;
  for (const auto& c : checks) {
    if (!c.pass) {
      names.push_back(c.name);
    }
  }
  if (!probability_sums_ok) {
    names.emplace_back("probability_sum");
  }
  return names;
}

ValidationResult compare(const std::vector<NamedValue>& analytic, const mc::Report& mc) {
  ValidationResult result;
  for (const auto& [name, value] : analytic) {
    const auto it = std::find_if(mc.scalars.begin(), mc.scalars.end(),
                                 [&](const mc::NamedEstimate& e) { return e.first == name; });
    // scalars without a finite counterpart on both sides are not comparable
    if (it == mc.scalars.end() || !std::isfinite(value) || !std::isfinite(it->second.mean)) {
      continue;
    }
    ValidationCheck check;
    check.name = name;
    check.analytic = value;
    check.mc = it->second;
    const double diff = check.mc.mean - value;
    if (check.mc.std_error > 0.0) {
      check.z = diff / check.mc.std_error;
      check.pass = std::abs(check.z) <= kZThreshold;
    } else {
      check.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
      check.pass = std::abs(diff) <= kProbabilitySumTol;
    }
    result.checks.push_back(check);
  }
  for (const char* p : {"p1", "p2", "p3", "p4"}) {
    for (const auto& [name, value] : analytic) {
      if (name == p) {
        result.analytic_probability_sum += value;
      }
    }
    result.mc_probability_sum += mc.at(p).mean;
  }
  result.probability_sums_ok = std::abs(result.analytic_probability_sum - 1.0) <= kProbabilitySumTol &&
                               std::abs(result.mc_probability_sum - 1.0) <= kProbabilitySumTol;
  result.pass = result.probability_sums_ok &&
                std::all_of(result.checks.begin(), result.checks.end(), [](const auto& c) { return c.pass; });
  return result;
}

ValidationResult run_validate(const RunConfig& cfg, const ValidateOptions& opts) {
  if (opts.samples < kMinValidationSamples) {
    throw ConfigError("samples", "validation needs at least " + std::to_string(kMinValidationSamples) +
                                     " realizations, got " + std::to_string(opts.samples));
  }
  const double gamma = gamma_of(cfg);
  auto analytic = analytic_scalars(analytic::evaluate(cfg.network, gamma));
  if (opts.corrupt_scalar) {
    auto it = std::find_if(analytic.begin(), analytic.end(), [&](const NamedValue& v) { return v.first == *opts.corrupt_scalar; });
    if (it == analytic.end()) {
      throw ConfigError("corrupt-analytic", "no analytic scalar named '" + *opts.corrupt_scalar + "'");
    }
    it->second *= 1.1;
  }
  McSettings settings{opts.samples, opts.seed, opts.mode, opts.window_factor};
  const mc::Report report = mc::estimate(cfg.network, gamma, settings.options(mc::Scope::Full));
  return compare(analytic, report);
}

}  // namespace hetnet::harness
