#include "npci/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "npci/csv.hpp"
#include "npci/dgp.hpp"
#include "npci/error.hpp"
#include "npci/lineargc.hpp"
#include "npci/mc.hpp"
#include "npci/report.hpp"
#include "npci/resample.hpp"

namespace npci {
namespace {

using nlohmann::json;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OutputOptions {
  std::string path;
  std::string format = "json";
  bool timestamps = false;
  std::string config_file;  // echoed when option defaults came from a file
};

void add_output_options(CLI::App* cmd, OutputOptions& o,
                        const std::string& default_format = "json") {
  o.format = default_format;
  cmd->add_option("--output,-o", o.path, "Write the report here (default: stdout)");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_flag("--timestamps", o.timestamps,
                "Add wall-clock times to the provenance block");
}

void write_report(Report report, const OutputOptions& o, std::ostream& out,
                  const std::string& started) {
  if (!o.config_file.empty()) report.config["config_file"] = o.config_file;
  report.provenance.config_hash = config_hash(report.config);
  if (o.timestamps) {
    report.provenance.started = started;
    report.provenance.finished = utc_now();
  }
  const ReportFormat fmt = o.format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
  if (o.path.empty()) {
    emit_report(report, fmt, out);
  } else {
    emit_report(report, fmt, o.path);
  }
}

WeightKind parse_weight(const std::string& s) {
  if (s == "sine") return WeightKind::kSine;
  if (s == "complex_exp") return WeightKind::kComplexExp;
  return WeightKind::kIndicator;
}

// --bandwidth-c and --bandwidth auto are mutually exclusive (enforced by
// CLI11); absent both, c = 1.
struct BandwidthOptions {
  std::vector<double> c;
  std::string mode;

  std::vector<BandwidthRule> rules() const {
    if (mode == "auto") return {BandwidthRule::data_driven()};
    if (c.empty()) return {BandwidthRule::fixed(1.0)};
    std::vector<BandwidthRule> out;
    for (double v : c) out.push_back(BandwidthRule::fixed(v));
    return out;
  }

  json echo() const {
    if (mode == "auto") return "auto";
    return c.empty() ? json::array({1.0}) : json(c);
  }
};

void add_bandwidth_options(CLI::App* cmd, BandwidthOptions& b, bool many) {
  auto* c_opt = cmd->add_option("--bandwidth-c", b.c,
                                "Bandwidth constant c in h = c n^{-1/3.5}");
  if (many) {
    c_opt->delimiter(',');
  } else {
    c_opt->expected(1);
  }
  auto* m_opt = cmd->add_option("--bandwidth", b.mode,
                                "'auto' for h = 1.06 sd(W) n^{-1/3.5}")
                    ->check(CLI::IsMember({"auto"}));
  c_opt->excludes(m_opt);
}

struct TestOptions {
  std::string input;
  std::string y_col;
  std::string z_col;
  std::vector<std::string> w_cols;
  Index lags = 1;
  Index horizon = 1;
  BandwidthOptions bandwidth;
  std::string weight = "indicator";
  std::string bootstrap = "multiplier";
  double block_a = 2.0;
  int replications = 200;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  OutputOptions output;
};

int run_test(const TestOptions& o, std::ostream& out, const std::string& started) {
  CsvSchema schema{o.y_col, o.z_col, o.w_cols, o.lags, o.horizon};
  const TimeSeriesSample sample = load_csv(o.input, schema);

  TestConfig cfg;
  cfg.bandwidth = o.bandwidth.rules().front();
  cfg.weight.kind = parse_weight(o.weight);
  cfg.bootstrap.scheme = o.bootstrap == "block" ? BootstrapScheme::kBlockMultiplier
                                                : BootstrapScheme::kMultiplier;
  cfg.bootstrap.block_a = o.block_a;
  cfg.bootstrap.replications = o.replications;
  cfg.bootstrap.seed = o.seed;
  cfg.alpha = o.alpha;

  Report report;
  report.provenance.seed = o.seed;
  report.config = {{"command", "test"},
                   {"input", o.input},
                   {"y_col", o.y_col},
                   {"z_col", o.z_col},
                   {"w_cols", o.w_cols.empty() ? std::vector<std::string>{o.y_col}
                                               : o.w_cols},
                   {"lags", o.lags},
                   {"horizon", o.horizon},
                   {"bandwidth", o.bandwidth.echo()},
                   {"weight_family", o.weight},
                   {"bootstrap", o.bootstrap},
                   {"block_a", o.block_a},
                   {"B", o.replications},
                   {"alpha", o.alpha},
                   {"seed", o.seed}};
  report.body = bootstrap_test(sample, cfg);
  write_report(std::move(report), o.output, out, started);
  return 0;
}

struct SimulateOptions {
  std::string dgp = "S1";
  Index n = 100;
  Index burn_in = 500;
  std::uint64_t seed = 1;
  std::string path;
  std::string format = "csv";
};

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  const DgpId id = parse_dgp(o.dgp);
  const TimeSeriesSample sample = make_triplet(simulate({id, o.n, o.burn_in, o.seed}), id);
  std::ostringstream body;
  if (o.format == "csv") {
    write_sample_csv(body, sample);
  } else {
    auto col = [](const RowMatrix& m) {
      return std::vector<double>(m.data(), m.data() + m.size());
    };
    json j = {{"dgp", o.dgp}, {"n", o.n}, {"burn_in", o.burn_in}, {"seed", o.seed},
              {"w", col(sample.w)}, {"y", col(sample.y)}, {"z", col(sample.z)}};
    body << j.dump(2) << '\n';
  }
  if (o.path.empty()) {
    out << body.str();
  } else {
    std::ofstream f(o.path, std::ios::binary);
    if (!f) throw Error(ErrorKind::kIo, "cannot write '" + o.path + "'");
    f << body.str();
  }
  return 0;
}

struct McOptions {
  std::vector<std::string> dgps{"S1"};
  std::vector<Index> sizes{100};
  BandwidthOptions bandwidth;
  std::string bootstrap = "multiplier";
  std::vector<double> block_a{2.0};
  std::string weight = "indicator";
  int reps = 500;
  int replications = 200;
  double alpha = 0.05;
  Index burn_in = 500;
  std::uint64_t seed = 1;
  bool full_scale = false;
  bool keep_p_values = false;
  OutputOptions output;
};

int run_mc(McOptions o, bool reps_given, bool b_given, std::ostream& out,
           const std::string& started) {
  if (o.full_scale) {
    if (!reps_given) o.reps = 2000;
    if (!b_given) o.replications = 1000;
  }
  ExperimentGrid grid;
  for (const auto& d : o.dgps) {
    if (d == "all") {
      grid.dgps.assign(kAllDgps.begin(), kAllDgps.end());
    } else {
      grid.dgps.push_back(parse_dgp(d));
    }
  }
  grid.sample_sizes = o.sizes;
  grid.bandwidths = o.bandwidth.rules();
  grid.scheme = o.bootstrap == "block" ? BootstrapScheme::kBlockMultiplier
                                       : BootstrapScheme::kMultiplier;
  if (grid.scheme == BootstrapScheme::kBlockMultiplier) grid.block_a = o.block_a;
  grid.weight.kind = parse_weight(o.weight);
  grid.replications = o.reps;
  grid.bootstrap_replications = o.replications;
  grid.alpha = o.alpha;
  grid.burn_in = o.burn_in;
  grid.seed = o.seed;
  grid.keep_p_values = o.keep_p_values;

  Report report;
  report.provenance.seed = o.seed;
  report.config = {{"command", "mc"},
                   {"dgp", o.dgps},
                   {"n", o.sizes},
                   {"bandwidth", o.bandwidth.echo()},
                   {"bootstrap", o.bootstrap},
                   {"block_a", o.block_a},
                   {"weight_family", o.weight},
                   {"reps", o.reps},
                   {"B", o.replications},
                   {"alpha", o.alpha},
                   {"burn_in", o.burn_in},
                   {"seed", o.seed}};
  report.body = run_experiment(grid);
  write_report(std::move(report), o.output, out, started);
  return 0;
}

struct GrangerOptions {
  std::string input;
  std::string y_col;
  std::string z_col;
  Index horizon = 1;
  std::optional<int> hac_lag;
  OutputOptions output;
};

int run_granger(const GrangerOptions& o, std::ostream& out, const std::string& started) {
  const CsvTable table = read_csv(o.input);
  const auto rp = numeric_column(table, o.y_col);
  const auto vrp = numeric_column(table, o.z_col);
  Report report;
  report.config = {{"command", "granger"},
                   {"input", o.input},
                   {"y_col", o.y_col},
                   {"z_col", o.z_col},
                   {"horizon", o.horizon},
                   {"hac_lags", o.hac_lag ? json(*o.hac_lag) : json("auto")}};
  report.body = linear_granger_test(rp, vrp, o.horizon, o.hac_lag);
  write_report(std::move(report), o.output, out, started);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonparametric conditional-independence tests for time series"};
  app.set_version_flag("--version", std::string(kToolVersion));
  auto* config_opt = app.set_config(
      "--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);

  TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Test Y independent of Z given W on a CSV file");
  test_cmd->add_option("--input,-i", test.input, "CSV file with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  test_cmd->add_option("--y-col", test.y_col, "Target column (led by --horizon)")->required();
  test_cmd->add_option("--z-col", test.z_col, "Candidate predictor column")->required();
  test_cmd->add_option("--w-cols", test.w_cols, "Conditioning columns (default: --y-col)")
      ->delimiter(',');
  test_cmd->add_option("--lags", test.lags, "Lags of each conditioning column")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  test_cmd->add_option("--horizon", test.horizon, "Lead of the target column")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_bandwidth_options(test_cmd, test.bandwidth, false);
  test_cmd->add_option("--weight-family", test.weight)
      ->check(CLI::IsMember({"indicator", "sine", "complex_exp"}))
      ->capture_default_str();
  test_cmd->add_option("--bootstrap", test.bootstrap)
      ->check(CLI::IsMember({"multiplier", "block"}))
      ->capture_default_str();
  test_cmd->add_option("--block-a", test.block_a, "Block length L = floor(a n^{1/4})")
      ->capture_default_str();
  test_cmd->add_option("--B", test.replications, "Bootstrap replications")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  test_cmd->add_option("--alpha", test.alpha)->capture_default_str();
  test_cmd->add_option("--seed", test.seed)->capture_default_str();
  add_output_options(test_cmd, test.output);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a design and write its (W, Y, Z) triplet");
  sim_cmd->add_option("--dgp", sim.dgp, "S1-S4, P1-P7")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Retained observations")
      ->check(CLI::Range(Index{2}, Index{100000000}))
      ->capture_default_str();
  sim_cmd->add_option("--burn-in", sim.burn_in)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--output,-o", sim.path);
  sim_cmd->add_option("--format", sim.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  McOptions mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo rejection rates");
  mc_cmd->add_option("--dgp", mc.dgps, "Comma-separated designs or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  mc_cmd->add_option("--n", mc.sizes, "Comma-separated sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  add_bandwidth_options(mc_cmd, mc.bandwidth, true);
  mc_cmd->add_option("--bootstrap", mc.bootstrap)
      ->check(CLI::IsMember({"multiplier", "block"}))
      ->capture_default_str();
  mc_cmd->add_option("--block-a", mc.block_a)->delimiter(',')->capture_default_str();
  mc_cmd->add_option("--weight-family", mc.weight)
      ->check(CLI::IsMember({"indicator", "sine", "complex_exp"}))
      ->capture_default_str();
  auto* reps_opt = mc_cmd->add_option("--reps", mc.reps, "Monte Carlo replications")
                       ->check(CLI::PositiveNumber)
                       ->capture_default_str();
  auto* b_opt = mc_cmd->add_option("--B", mc.replications, "Bootstrap replications")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  mc_cmd->add_option("--alpha", mc.alpha)->capture_default_str();
  mc_cmd->add_option("--burn-in", mc.burn_in)->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed)->capture_default_str();
  mc_cmd->add_flag("--full-scale", mc.full_scale,
                   "2000 replications and B = 1000 unless given explicitly");
  mc_cmd->add_flag("--keep-p-values", mc.keep_p_values,
                   "Store every replication's p-values in the JSON report");
  add_output_options(mc_cmd, mc.output);

  GrangerOptions gr;
  auto* gr_cmd = app.add_subcommand("granger", "Linear Granger test with Newey-West errors");
  gr_cmd->add_option("--input,-i", gr.input)->required()->check(CLI::ExistingFile);
  gr_cmd->add_option("--y-col", gr.y_col, "Target series (RP)")->required();
  gr_cmd->add_option("--z-col", gr.z_col, "Candidate predictor (VRP)")->required();
  gr_cmd->add_option("--horizon", gr.horizon)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gr_cmd->add_option("--hac-lags", gr.hac_lag,
                     "Newey-West truncation (default floor(4 (n/100)^{2/9}))");
  add_output_options(gr_cmd, gr.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "npci: error[usage]: " << msg << '\n';
    return 2;
  }

  if (config_opt->count() > 0) {
    const std::string file = config_opt->as<std::string>();
    test.output.config_file = mc.output.config_file = gr.output.config_file = file;
  }
  const std::string started = utc_now();
  try {
    if (*test_cmd) return run_test(test, out, started);
    if (*sim_cmd) return run_simulate(sim, out);
    if (*mc_cmd) return run_mc(mc, reps_opt->count() > 0, b_opt->count() > 0, out, started);
    if (*gr_cmd) return run_granger(gr, out, started);
  } catch (const Error& e) {
    err << "npci: error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "npci: error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace npci
