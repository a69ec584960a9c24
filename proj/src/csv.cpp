#include "npci/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "npci/dgp.hpp"
#include "npci/error.hpp"

namespace npci {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!have_header) {
      table.header = split(line);
      if (!table.header.empty() && table.header[0].starts_with("\xEF\xBB\xBF")) {
        table.header[0].erase(0, 3);
      }
      have_header = true;
      continue;
    }
    ++row;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::kParse,
                  "row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw Error(ErrorKind::kParse, "CSV input has no header row");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  return parse_csv(in);
}

std::vector<double> numeric_column(const CsvTable& table, std::string_view name) {
  size_t idx = table.header.size();
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) idx = i;
  }
  if (idx == table.header.size()) {
    throw Error(ErrorKind::kParse, "missing column '" + std::string(name) + "'");
  }
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& cell = table.rows[r][idx];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
        !std::isfinite(v)) {
      throw Error(ErrorKind::kParse,
                  "row " + std::to_string(r + 1) + ", column '" +
                      std::string(name) + "': invalid numeric value '" + cell +
                      "'");
    }
    out.push_back(v);
  }
  return out;
}

TimeSeriesSample table_to_sample(const CsvTable& table, const CsvSchema& schema) {
  const std::vector<std::string> w_cols =
      schema.w_cols.empty() ? std::vector<std::string>{schema.y_col}
                            : schema.w_cols;
  const std::vector<double> y = numeric_column(table, schema.y_col);
  const std::vector<double> z = numeric_column(table, schema.z_col);
  std::vector<std::vector<double>> w;
  w.reserve(w_cols.size());
  for (const auto& name : w_cols) w.push_back(numeric_column(table, name));

  EmbedRoles roles{y, z, {}};
  for (const auto& col : w) roles.conditioning.emplace_back(col);
  TimeSeriesSample sample = lag_embed(roles, schema.lags, schema.horizon);
  if (sample.size() < 2) {
    throw Error(ErrorKind::kInsufficientData,
                "too few rows: the embedded sample has " +
                    std::to_string(sample.size()) + " observations");
  }
  sample.validate();
  return sample;
}

TimeSeriesSample load_csv(const std::string& path, const CsvSchema& schema) {
  return table_to_sample(read_csv(path), schema);
}

void write_sample_csv(std::ostream& out, const TimeSeriesSample& sample) {
  auto names = [](const char* base, Index d) {
    std::vector<std::string> v;
    if (d == 1) return std::vector<std::string>{base};
    for (Index k = 1; k <= d; ++k) v.push_back(base + std::to_string(k));
    return v;
  };
  std::vector<std::string> header;
  for (auto& s : names("w", sample.dim_w())) header.push_back(s);
  for (auto& s : names("y", sample.dim_y())) header.push_back(s);
  for (auto& s : names("z", sample.dim_z())) header.push_back(s);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  char buf[64];
  auto put = [&](double v, bool first) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (!first) out << ',';
    out.write(buf, res.ptr - buf);
  };
  for (Index t = 0; t < sample.size(); ++t) {
    bool first = true;
    for (Index k = 0; k < sample.dim_w(); ++k, first = false) put(sample.w(t, k), first);
    for (Index k = 0; k < sample.dim_y(); ++k) put(sample.y(t, k), false);
    for (Index k = 0; k < sample.dim_z(); ++k) put(sample.z(t, k), false);
    out << '\n';
  }
}

}  // namespace npci
