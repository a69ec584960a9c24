#include "npci/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "npci/error.hpp"

namespace npci {

using nlohmann::json;

namespace {

json bandwidth_json(const BandwidthRule& b) {
  if (b.kind == BandwidthRule::Kind::kDataDriven) return {{"rule", "data_driven"}};
  return {{"rule", "fixed_c"}, {"c", b.c}};
}

BandwidthRule bandwidth_from(const json& j) {
  if (j.at("rule").get<std::string>() == "data_driven") {
    return BandwidthRule::data_driven();
  }
  return BandwidthRule::fixed(j.at("c").get<double>());
}

std::string_view weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::kIndicator: return "indicator";
    case WeightKind::kSine: return "sine";
    case WeightKind::kComplexExp: return "complex_exp";
  }
  return "?";
}

WeightKind weight_kind_from(std::string_view s) {
  if (s == "indicator") return WeightKind::kIndicator;
  if (s == "sine") return WeightKind::kSine;
  if (s == "complex_exp") return WeightKind::kComplexExp;
  throw Error(ErrorKind::kParse, "unknown weight family '" + std::string(s) + "'");
}

json row_json(const Eigen::RowVectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::RowVectorXd row_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Index>(v.size()));
}

json weight_json(const WeightFamily& w) {
  json j = {{"family", weight_name(w.kind)}, {"domain", nullptr}};
  if (w.domain) {
    j["domain"] = {{"lower", row_json(w.domain->lower)},
                   {"upper", row_json(w.domain->upper)}};
  }
  return j;
}

WeightFamily weight_from(const json& j) {
  WeightFamily w;
  w.kind = weight_kind_from(j.at("family").get<std::string>());
  if (j.contains("domain") && !j.at("domain").is_null()) {
    w.domain = Box{row_from(j.at("domain").at("lower")),
                   row_from(j.at("domain").at("upper"))};
  }
  return w;
}

std::string_view scheme_name(BootstrapScheme s) {
  return s == BootstrapScheme::kBlockMultiplier ? "block_multiplier" : "multiplier";
}

BootstrapScheme scheme_from(std::string_view s) {
  if (s == "multiplier") return BootstrapScheme::kMultiplier;
  if (s == "block_multiplier") return BootstrapScheme::kBlockMultiplier;
  throw Error(ErrorKind::kParse, "unknown bootstrap scheme '" + std::string(s) + "'");
}

json pair_json(double cvm, double ks) { return {{"cvm", cvm}, {"ks", ks}}; }

TestConfig test_config_from(const json& j) {
  TestConfig c;
  c.kernel.dim = j.at("kernel").at("dim").get<int>();
  c.bandwidth = bandwidth_from(j.at("bandwidth"));
  c.weight = weight_from(j.at("weight"));
  const json& b = j.at("bootstrap");
  c.bootstrap.scheme = scheme_from(b.at("scheme").get<std::string>());
  c.bootstrap.replications = b.at("B").get<int>();
  c.bootstrap.block_a = b.at("block_a").get<double>();
  c.bootstrap.seed = b.at("seed").get<std::uint64_t>();
  c.alpha = j.at("alpha").get<double>();
  return c;
}

TestResult test_result_from(const json& j) {
  TestResult r;
  r.statistic = {j.at("statistic").at("cvm").get<double>(),
                 j.at("statistic").at("ks").get<double>()};
  r.p_cvm = j.at("p_value").at("cvm").get<double>();
  r.p_ks = j.at("p_value").at("ks").get<double>();
  r.reject_cvm = j.at("reject").at("cvm").get<bool>();
  r.reject_ks = j.at("reject").at("ks").get<bool>();
  r.cvm_quantiles = j.at("quantiles").at("cvm").get<std::array<double, 3>>();
  r.ks_quantiles = j.at("quantiles").at("ks").get<std::array<double, 3>>();
  r.n = j.at("n").get<Index>();
  r.bandwidth = j.at("bandwidth").get<double>();
  r.block_length = j.at("block_length").get<Index>();
  r.config = test_config_from(j.at("config"));
  return r;
}

json grid_json(const ExperimentGrid& g) {
  json dgps = json::array();
  for (DgpId d : g.dgps) dgps.push_back(to_string(d));
  json bws = json::array();
  for (const auto& b : g.bandwidths) bws.push_back(bandwidth_json(b));
  return {{"dgps", dgps},
          {"sample_sizes", g.sample_sizes},
          {"bandwidths", bws},
          {"scheme", scheme_name(g.scheme)},
          {"block_a", g.block_a},
          {"weight", weight_json(g.weight)},
          {"replications", g.replications},
          {"B", g.bootstrap_replications},
          {"alpha", g.alpha},
          {"burn_in", g.burn_in},
          {"seed", g.seed},
          {"keep_p_values", g.keep_p_values}};
}

ExperimentGrid grid_from(const json& j) {
  ExperimentGrid g;
  for (const auto& d : j.at("dgps")) g.dgps.push_back(parse_dgp(d.get<std::string>()));
  g.sample_sizes = j.at("sample_sizes").get<std::vector<Index>>();
  for (const auto& b : j.at("bandwidths")) g.bandwidths.push_back(bandwidth_from(b));
  g.scheme = scheme_from(j.at("scheme").get<std::string>());
  g.block_a = j.at("block_a").get<std::vector<double>>();
  g.weight = weight_from(j.at("weight"));
  g.replications = j.at("replications").get<int>();
  g.bootstrap_replications = j.at("B").get<int>();
  g.alpha = j.at("alpha").get<double>();
  g.burn_in = j.at("burn_in").get<Index>();
  g.seed = j.at("seed").get<std::uint64_t>();
  g.keep_p_values = j.at("keep_p_values").get<bool>();
  return g;
}

json mc_json(const McReport& r, bool include_timing) {
  json cells = json::array();
  for (const McCell& c : r.cells) {
    json cj = {{"dgp", to_string(c.dgp)},
               {"n", c.n},
               {"bandwidth", bandwidth_json(c.bandwidth)},
               {"block_a", c.block_a},
               {"replications", c.replications},
               {"failures", c.failures},
               {"rate", pair_json(c.rate_cvm, c.rate_ks)},
               {"se", pair_json(c.se_cvm, c.se_ks)}};
    if (!c.first_error.empty()) cj["first_error"] = c.first_error;
    if (r.grid.keep_p_values) cj["p_values"] = {{"cvm", c.p_cvm}, {"ks", c.p_ks}};
    if (include_timing) cj["seconds"] = c.seconds;
    cells.push_back(std::move(cj));
  }
  return {{"grid", grid_json(r.grid)}, {"cells", cells}};
}

McReport mc_from(const json& j) {
  McReport r;
  r.grid = grid_from(j.at("grid"));
  for (const json& cj : j.at("cells")) {
    McCell c;
    c.dgp = parse_dgp(cj.at("dgp").get<std::string>());
    c.n = cj.at("n").get<Index>();
    c.bandwidth = bandwidth_from(cj.at("bandwidth"));
    c.block_a = cj.at("block_a").get<double>();
    c.replications = cj.at("replications").get<int>();
    c.failures = cj.at("failures").get<int>();
    c.rate_cvm = cj.at("rate").at("cvm").get<double>();
    c.rate_ks = cj.at("rate").at("ks").get<double>();
    c.se_cvm = cj.at("se").at("cvm").get<double>();
    c.se_ks = cj.at("se").at("ks").get<double>();
    if (cj.contains("first_error")) c.first_error = cj.at("first_error").get<std::string>();
    if (cj.contains("p_values")) {
      c.p_cvm = cj.at("p_values").at("cvm").get<std::vector<double>>();
      c.p_ks = cj.at("p_values").at("ks").get<std::vector<double>>();
    }
    if (cj.contains("seconds")) c.seconds = cj.at("seconds").get<double>();
    r.cells.push_back(std::move(c));
  }
  return r;
}

HacRegressionResult hac_from(const json& j) {
  HacRegressionResult r;
  r.intercept = j.at("intercept").get<double>();
  r.beta = j.at("beta").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.alpha_se = j.at("alpha_se").get<double>();
  r.t_stat = j.at("t_stat").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.hac_lag = j.at("hac_lag").get<int>();
  r.n = j.at("n").get<Index>();
  return r;
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string rate3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string bandwidth_label(const BandwidthRule& b) {
  return b.kind == BandwidthRule::Kind::kDataDriven ? "auto" : num(b.c);
}

}  // namespace

json to_json(const TestConfig& c) {
  return {{"kernel", {{"family", "gaussian"}, {"dim", c.kernel.dim}}},
          {"bandwidth", bandwidth_json(c.bandwidth)},
          {"weight", weight_json(c.weight)},
          {"bootstrap",
           {{"scheme", scheme_name(c.bootstrap.scheme)},
            {"B", c.bootstrap.replications},
            {"block_a", c.bootstrap.block_a},
            {"seed", c.bootstrap.seed}}},
          {"alpha", c.alpha}};
}

json to_json(const TestResult& r) {
  return {{"statistic", pair_json(r.statistic.cvm, r.statistic.ks)},
          {"p_value", pair_json(r.p_cvm, r.p_ks)},
          {"reject", {{"cvm", r.reject_cvm}, {"ks", r.reject_ks}}},
          {"quantiles",
           {{"levels", kReportedQuantiles},
            {"cvm", r.cvm_quantiles},
            {"ks", r.ks_quantiles}}},
          {"n", r.n},
          {"bandwidth", r.bandwidth},
          {"block_length", r.block_length},
          {"config", to_json(r.config)}};
}

json to_json(const McReport& r) { return mc_json(r, false); }

json to_json(const HacRegressionResult& r) {
  return {{"intercept", r.intercept}, {"beta", r.beta},
          {"alpha", r.alpha},         {"alpha_se", r.alpha_se},
          {"t_stat", r.t_stat},       {"p_value", r.p_value},
          {"hac_lag", r.hac_lag},     {"n", r.n}};
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const Report& report) {
  json prov = {{"tool", report.provenance.tool},
               {"version", report.provenance.version},
               {"config_hash", report.provenance.config_hash},
               {"seed", report.provenance.seed}};
  if (report.provenance.started) prov["started"] = *report.provenance.started;
  if (report.provenance.finished) prov["finished"] = *report.provenance.finished;
  const bool timing = report.provenance.started.has_value();

  json j = {{"provenance", prov}, {"config", report.config}};
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, TestResult>) {
          j["kind"] = "test";
          j["result"] = to_json(body);
        } else if constexpr (std::is_same_v<T, McReport>) {
          j["kind"] = "mc";
          j["result"] = mc_json(body, timing);
        } else {
          j["kind"] = "granger";
          j["result"] = to_json(body);
        }
      },
      report.body);
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    const json& p = j.at("provenance");
    r.provenance.tool = p.at("tool").get<std::string>();
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.config_hash = p.at("config_hash").get<std::string>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    if (p.contains("started")) r.provenance.started = p.at("started").get<std::string>();
    if (p.contains("finished")) r.provenance.finished = p.at("finished").get<std::string>();
    r.config = j.at("config");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "test") {
      r.body = test_result_from(j.at("result"));
    } else if (kind == "mc") {
      r.body = mc_from(j.at("result"));
    } else if (kind == "granger") {
      r.body = hac_from(j.at("result"));
    } else {
      throw Error(ErrorKind::kParse, "unknown report kind '" + kind + "'");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed report: ") + e.what());
  }
}

std::string to_json_string(const Report& report) {
  return to_json(report).dump(2) + "\n";
}

std::string mc_to_csv(const McReport& report) {
  std::ostringstream out;
  out << "statistic,scheme,n,c,a";
  for (DgpId d : kAllDgps) out << ',' << to_string(d);
  out << '\n';

  // row key: (n, bandwidth label, a) in first-seen order
  using Key = std::tuple<Index, std::string, double>;
  std::vector<Key> keys;
  std::map<Key, std::map<DgpId, const McCell*>> rows;
  for (const McCell& c : report.cells) {
    Key k{c.n, bandwidth_label(c.bandwidth), c.block_a};
    if (!rows.contains(k)) keys.push_back(k);
    rows[k][c.dgp] = &c;
  }
  const std::string scheme(scheme_name(report.grid.scheme));
  for (const char* stat : {"cvm", "ks"}) {
    const bool is_cvm = stat[0] == 'c';
    for (const Key& k : keys) {
      const auto& [n, c, a] = k;
      out << stat << ',' << scheme << ',' << n << ',' << c << ','
          << (report.grid.scheme == BootstrapScheme::kBlockMultiplier ? num(a) : "");
      const auto& by_dgp = rows.at(k);
      for (DgpId d : kAllDgps) {
        out << ',';
        if (auto it = by_dgp.find(d); it != by_dgp.end() && it->second->replications > 0) {
          out << rate3(is_cvm ? it->second->rate_cvm : it->second->rate_ks);
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string to_csv_string(const Report& report) {
  std::ostringstream out;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, TestResult>) {
          out << "statistic,value,p_value,q90,q95,q99,reject\n";
          out << "cvm," << num(body.statistic.cvm) << ',' << num(body.p_cvm);
          for (double q : body.cvm_quantiles) out << ',' << num(q);
          out << ',' << (body.reject_cvm ? "true" : "false") << '\n';
          out << "ks," << num(body.statistic.ks) << ',' << num(body.p_ks);
          for (double q : body.ks_quantiles) out << ',' << num(q);
          out << ',' << (body.reject_ks ? "true" : "false") << '\n';
        } else if constexpr (std::is_same_v<T, McReport>) {
          out << mc_to_csv(body);
        } else {
          out << "alpha,alpha_se,t_stat,p_value,intercept,beta,hac_lag,n\n"
              << num(body.alpha) << ',' << num(body.alpha_se) << ','
              << num(body.t_stat) << ',' << num(body.p_value) << ','
              << num(body.intercept) << ',' << num(body.beta) << ','
              << body.hac_lag << ',' << body.n << '\n';
        }
      },
      report.body);
  return out.str();
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
  out << (format == ReportFormat::kJson ? to_json_string(report)
                                        : to_csv_string(report));
}

void emit_report(const Report& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  emit_report(report, format, out);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path + "' failed");
}

}  // namespace npci
