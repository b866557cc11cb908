#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hetnet/harness/cli.hpp"
#include "hetnet/harness/config_io.hpp"
#include "hetnet/harness/experiments.hpp"
#include "hetnet/harness/results.hpp"
#include "hetnet/units.hpp"

using namespace hetnet;
using namespace hetnet::harness;

namespace {

const std::filesystem::path kData = HETNET_TEST_DATA_DIR;

const char* kDefaultConfig = R"({
  "density_mbs_per_km2": 1, "density_fbs_per_km2": 10, "density_devices_per_km2": 100,
  "power_mbs_dbm": 46, "power_fbs_dbm": 20, "power_device_dbm": 20,
  "path_loss_exponent": 4, "noise_power_w": 1e-12
})";

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hetnet");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hetnet_harness_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST(ConfigIo, ParsesUnitsIntoSi) {
  const RunConfig cfg = parse_run_config(kDefaultConfig);
  EXPECT_DOUBLE_EQ(cfg.network.lambda_m, 1e-6);
  EXPECT_DOUBLE_EQ(cfg.network.lambda_f, 1e-5);
  EXPECT_NEAR(cfg.network.p_m, 39.810717055349734, 1e-12);
  EXPECT_NEAR(cfg.network.p_f, 0.1, 1e-15);
  EXPECT_EQ(cfg.network.noise, 1e-12);
  EXPECT_EQ(cfg.target_sinr_db, 2.0);
  EXPECT_FALSE(cfg.monte_carlo.has_value());
}

TEST(ConfigIo, MissingFieldIsNamed) {
  try {
    (void)parse_run_config(replace(kDefaultConfig, R"("power_fbs_dbm": 20, )", ""));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "power_fbs_dbm");
  }
}

TEST(ConfigIo, TooFewDevicesForThinningIsRejected) {
  try {
    (void)parse_run_config(replace(kDefaultConfig, R"("density_devices_per_km2": 100)", R"("density_devices_per_km2": 5)"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "density_devices_per_km2");
  }
}

TEST(ConfigIo, RejectsMalformedInput) {
  EXPECT_THROW((void)parse_run_config("{not json"), ConfigError);
  EXPECT_THROW((void)parse_run_config("[1, 2]"), ConfigError);
  EXPECT_THROW((void)parse_run_config(replace(kDefaultConfig, R"("path_loss_exponent": 4)", R"("path_loss_exponent": "4")")),
               ConfigError);
  EXPECT_THROW((void)parse_run_config(replace(kDefaultConfig, R"("noise_power_w": 1e-12)", R"("noise_power_w": 1e-12, "noise_power_dbm": -90)")),
               ConfigError);
  EXPECT_THROW((void)parse_run_config(replace(kDefaultConfig, R"("path_loss_exponent": 4)", R"("path_loss_exponent": 2)")),
               ConfigError);
}

TEST(ConfigIo, NoiseInDbm) {
  const auto cfg = parse_run_config(replace(kDefaultConfig, R"("noise_power_w": 1e-12)", R"("noise_power_dbm": -90)"));
  EXPECT_NEAR(cfg.network.noise, 1e-12, 1e-24);
}

TEST(ConfigIo, MonteCarloBlock) {
  const auto cfg = parse_run_config(replace(
      kDefaultConfig, R"("noise_power_w": 1e-12)",
      R"("noise_power_w": 1e-12, "monte_carlo": {"samples": 5000, "seed": 9, "mode": "accurate", "window_factor": 8})"));
  ASSERT_TRUE(cfg.monte_carlo.has_value());
  EXPECT_EQ(cfg.monte_carlo->samples, 5000u);
  EXPECT_EQ(cfg.monte_carlo->seed, 9u);
  EXPECT_EQ(cfg.monte_carlo->mode, mc::SimMode::Accurate);
  EXPECT_EQ(cfg.monte_carlo->window_factor, 8.0);
  EXPECT_THROW((void)parse_run_config(replace(kDefaultConfig, R"("noise_power_w": 1e-12)",
                                              R"("noise_power_w": 1e-12, "monte_carlo": {"samples": 10})")),
               ConfigError);
}

TEST(ConfigIo, DescribeParsesBack) {
  RunConfig cfg = parse_run_config(kDefaultConfig);
  cfg.monte_carlo = McSettings{};
  const RunConfig again = parse_run_config(describe(cfg));
  EXPECT_NEAR(again.network.p_m, cfg.network.p_m, 1e-14 * cfg.network.p_m);
  EXPECT_NEAR(again.network.lambda_d, cfg.network.lambda_d, 1e-14 * cfg.network.lambda_d);
  EXPECT_EQ(again.network.alpha, cfg.network.alpha);
  EXPECT_TRUE(again.monte_carlo.has_value());
}

TEST(ConfigIo, SweepGridForms) {
  const auto spec = load_sweep(kData / "sweep_ratio.json");
  EXPECT_EQ(spec.variable, SweepVariable::FemtoDensityRatio);
  ASSERT_EQ(spec.grid.size(), 13u);
  EXPECT_EQ(spec.grid.front(), 0.1);
  EXPECT_EQ(spec.grid.back(), 100.0);
  EXPECT_NEAR(spec.grid[6], std::sqrt(10.0), 1e-12);
  EXPECT_DOUBLE_EQ(spec.point(12).network.lambda_f, 100.0 * spec.base.network.lambda_m);
}

TEST(ConfigIo, SweepGridMustIncrease) {
  const std::string base = std::string(R"({"variable": "target_sinr_db", "base": )") + kDefaultConfig;
  EXPECT_THROW((void)parse_sweep(base + R"(, "grid": [1, 1]})"), ConfigError);
  EXPECT_THROW((void)parse_sweep(base + R"(, "grid": []})"), ConfigError);
  EXPECT_NO_THROW((void)parse_sweep(base + R"(, "grid": [-3, 0, 4.5]})"));
  const std::string ratio = std::string(R"({"variable": "femto_density_ratio", "base": )") + kDefaultConfig;
  // lambda_d = 100 lambda_M leaves room for at most 99 femtos per macro
  EXPECT_THROW((void)parse_sweep(ratio + R"(, "grid": [1, 200]})"), ConfigError);
}

TEST(Results, ShortestRoundTripNumbers) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(100000.0), "100000");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(1e-12), "1e-12");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  for (double v : {1.0 / 3.0, 0.575230333674031, 6.02214076e23, 2.2250738585072014e-308}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Results, CsvRoundTrip) {
  ResultTable t;
  t.comments = {"hetnet test", "config {\"a\":1}"};
  t.columns = {"x", "label", "y"};
  t.rows = {{1.0 / 3.0, std::string("ok"), std::numeric_limits<double>::quiet_NaN()},
            {2e-17, std::string("failed: a, \"quoted\" thing"), 123456789.0},
            {-0.0, std::string("42"), 1e300}};
  const ResultTable back = parse_csv(to_csv(t));
  EXPECT_EQ(back.comments, t.comments);
  EXPECT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_EQ(back.number(0, "x"), 1.0 / 3.0);
  EXPECT_TRUE(std::isnan(back.number(0, "y")));
  EXPECT_EQ(std::get<std::string>(back.rows[1][1]), "failed: a, \"quoted\" thing");
  EXPECT_EQ(back.number(1, "y"), 123456789.0);
  // a numeric-looking string stays a string once quoted
  EXPECT_EQ(to_csv(back), to_csv(t));
}

TEST(Results, AnalyticRowSurvivesCsvToFifteenDigits) {
  const auto table = run_throughput(parse_run_config(kDefaultConfig));
  const auto back = parse_csv(to_csv(table));
  ASSERT_EQ(back.columns, table.columns);
  for (const auto& name : table.columns) {
    const double a = table.number(0, name);
    const double b = back.number(0, name);
    if (std::isnan(a)) {
      EXPECT_TRUE(std::isnan(b)) << name;
    } else {
      EXPECT_NEAR(b, a, 1e-15 * std::abs(a)) << name;
    }
  }
}

TEST(Results, JsonHasRowsKeyedByColumn) {
  ResultTable t;
  t.columns = {"a", "b"};
  t.rows = {{1.5, std::string("x")}};
  const std::string json = to_json(t);
  EXPECT_NE(json.find("\"a\": 1.5"), std::string::npos);
  EXPECT_NE(json.find("\"b\": \"x\""), std::string::npos);
}

TEST(Results, WriteAtomicallyReportsIoErrors) {
  const auto p = scratch("atomic.csv");
  write_atomically(p, "abc\n");
  EXPECT_EQ(slurp(p), "abc\n");
  EXPECT_FALSE(std::filesystem::exists(p.string() + ".tmp"));
  EXPECT_THROW(write_atomically("/nonexistent-dir/x.csv", "abc"), IoError);
}

TEST(Experiments, AssocRowForDefaultConfig) {
  const auto table = run_assoc(parse_run_config(kDefaultConfig));
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_NEAR(table.number(0, "p2"), 0.5752, 5e-5);
  EXPECT_NEAR(table.number(0, "load_mu"), 100.0 / 11.0, 1e-12);
  EXPECT_EQ(table.columns.front(), "p1");
  EXPECT_FALSE(table.comments.empty());
}

TEST(Experiments, SinglePointSweepEqualsAssoc) {
  const RunConfig cfg = parse_run_config(kDefaultConfig);
  const auto spec = parse_sweep(std::string(R"({"variable": "femto_density_ratio", "grid": [10], "base": )") +
                                kDefaultConfig + "}");
  const auto sweep = run_sweep(spec);
  const auto assoc = run_assoc(cfg);
  ASSERT_EQ(sweep.rows.size(), 1u);
  ASSERT_EQ(sweep.columns.size(), assoc.columns.size() + 1);
  EXPECT_EQ(sweep.number(0, "femto_density_ratio"), 10.0);
  for (const auto& name : assoc.columns) {
    EXPECT_DOUBLE_EQ(sweep.number(0, name), assoc.number(0, name)) << name;
  }
}

TEST(Experiments, RatioSweepPeaksNearDecouplingOptimum) {
  auto spec = load_sweep(kData / "sweep_ratio.json");
  spec.grid.clear();
  for (int i = 0; i <= 300; ++i) {
    spec.grid.push_back(std::pow(10.0, -1.0 + 0.01 * i));
  }
  const auto table = run_sweep(spec);
  std::size_t best = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.number(r, "p2") > table.number(best, "p2")) {
      best = r;
    }
  }
  EXPECT_NEAR(table.number(best, "p2"), 0.634, 1e-3);
  EXPECT_NEAR(table.number(best, "femto_density_ratio"), 4.47, 0.06);
}

TEST(Experiments, SinrSweepKeepsAverageGainAboveOne) {
  const auto table = run_sweep(load_sweep(kData / "sweep_sinr.json"));
  ASSERT_EQ(table.rows.size(), 31u);
  EXPECT_EQ(table.columns.front(), "target_sinr_db");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    EXPECT_GT(table.number(r, "eta_bar"), 1.0) << table.number(r, "target_sinr_db") << " dB";
  }
}

TEST(Experiments, MonteCarloColumnsComeInTriplets) {
  RunConfig cfg = parse_run_config(kDefaultConfig);
  cfg.monte_carlo = McSettings{};
  cfg.monte_carlo->samples = 500;
  const auto table = run_assoc(cfg);
  for (const auto& name : {"p1", "p2", "p3", "p4", "a_md", "a_fd", "a_mu", "a_fu"}) {
    const std::string base = std::string("mc_") + name;
    EXPECT_EQ(table.number(0, base + "_n"), 500.0);
    EXPECT_GE(table.number(0, base + "_se"), 0.0);
    EXPECT_GE(table.number(0, base + "_mean"), 0.0);
  }
  EXPECT_EQ(std::get<std::string>(table.rows[0][table.column("mc_status")]), "ok");
}

TEST(Experiments, MonteCarloFailureMarksRow) {
  // a huge window with a dense femto tier cannot be drawn: the estimator
  // rejects the run and the row records it instead of aborting the sweep
  auto spec = parse_sweep(std::string(R"({"variable": "target_sinr_db", "grid": [0, 1], "base": )") + kDefaultConfig + "}");
  spec.base.monte_carlo = McSettings{};
  spec.base.monte_carlo->samples = 100;
  spec.base.monte_carlo->window_factor = std::numeric_limits<double>::infinity();
  const auto table = run_sweep(spec);
  ASSERT_EQ(table.rows.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(std::get<std::string>(table.rows[r][table.column("mc_status")]).rfind("failed:", 0), 0u);
    EXPECT_TRUE(std::isnan(table.number(r, "mc_eta_bar_mean")));
    EXPECT_TRUE(std::isfinite(table.number(r, "eta_bar")));
  }
}

TEST(Validation, CompareFlagsLargeDeviations) {
  mc::Report report;
  report.scalars = {{"p1", {0.1, 0.01, 1000}}, {"p2", {0.5, 0.01, 1000}}, {"p3", {0.0, 0.0, 1000}},
                    {"p4", {0.4, 0.01, 1000}}, {"x", {2.0, 0.1, 1000}}};
  const auto ok = compare({{"p1", 0.1}, {"p2", 0.5}, {"p3", 0.0}, {"p4", 0.4}, {"x", 2.25}}, report);
  EXPECT_TRUE(ok.pass);
  EXPECT_NEAR(ok.checks.back().z, -2.5, 1e-12);
  const auto bad = compare({{"p1", 0.1}, {"p2", 0.5}, {"p3", 0.0}, {"p4", 0.4}, {"x", 2.5}}, report);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.offenders(), std::vector<std::string>{"x"});
  const auto leaky = compare({{"p1", 0.1}, {"p2", 0.5}, {"p3", 0.0}, {"p4", 0.41}}, report);
  EXPECT_FALSE(leaky.probability_sums_ok);
}

TEST(Validation, TooFewSamplesIsAConfigError) {
  ValidateOptions opts;
  opts.samples = 10;
  EXPECT_THROW((void)run_validate(parse_run_config(kDefaultConfig), opts), ConfigError);
}

TEST(Cli, AssocDefaultsPrintCsv) {
  const auto r = cli({"assoc"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("# hetnet assoc", 0), 0u);
  EXPECT_NE(r.out.find("\np1,p2,p3,p4,"), std::string::npos);
}

TEST(Cli, MissingFieldExitsTwoAndNamesIt) {
  const auto r = cli({"assoc", "--config", (kData / "missing_field.json").string()});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("power_fbs_dbm"), std::string::npos);
}

TEST(Cli, ThinningAboveOneExitsTwo) {
  const auto r = cli({"assoc", "--config", (kData / "too_few_devices.json").string()});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("density_devices_per_km2"), std::string::npos);
}

TEST(Cli, IoFailuresExitThree) {
  EXPECT_EQ(cli({"assoc", "--config", (kData / "nope.json").string()}).code, kExitIoError);
  EXPECT_EQ(cli({"assoc", "--out", "/nonexistent-dir/out.csv"}).code, kExitIoError);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, kExitConfigError);
  EXPECT_EQ(cli({"assoc", "--format", "xml"}).code, kExitConfigError);
  EXPECT_EQ(cli({"assoc", "--mode", "exact"}).code, kExitConfigError);
  EXPECT_EQ(cli({"assoc", "--samples", "50"}).code, kExitConfigError);
  EXPECT_EQ(cli({"sweep"}).code, kExitConfigError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, ValidateBelowMinimumExitsTwo) {
  EXPECT_EQ(cli({"validate", "--samples", "10"}).code, kExitConfigError);
}

TEST(Cli, CorruptedAnalyticScalarFailsValidation) {
  const auto r = cli({"validate", "--samples", "2000", "--corrupt-analytic", "p2"});
  EXPECT_EQ(r.code, kExitValidationFailed);
  EXPECT_NE(r.err.find("p2"), std::string::npos);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, RerunsAreByteIdentical) {
  const auto a = scratch("rerun_a.csv");
  const auto b = scratch("rerun_b.csv");
  for (const auto& p : {a, b}) {
    ASSERT_EQ(cli({"throughput", "--samples", "300", "--seed", "4", "--out", p.string()}).code, kExitOk);
  }
  const std::string first = slurp(a);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(b));
  const auto j1 = cli({"sweep", "--config", (kData / "sweep_ratio.json").string(), "--samples", "200", "--format", "json"});
  const auto j2 = cli({"sweep", "--config", (kData / "sweep_ratio.json").string(), "--samples", "200", "--format", "json"});
  EXPECT_EQ(j1.code, kExitOk);
  EXPECT_EQ(j1.out, j2.out);
}
