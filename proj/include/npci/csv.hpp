#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "npci/sample.hpp"

namespace npci {

// Header row plus raw string cells. Comma separated, '.' decimal point,
// no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

// Parses every cell of the named column. Rows are numbered from 1, the
// header excluded. Missing, non-numeric and non-finite cells are errors.
std::vector<double> numeric_column(const CsvTable& table,
                                   std::string_view name);

struct CsvSchema {
  std::string y_col;
  std::string z_col;
  std::vector<std::string> w_cols;  // defaults to {y_col}
  Index lags = 1;
  Index horizon = 1;
};

// Reads the file and builds the sample with lag_embed: Y is y_col led by
// `horizon`, Z is z_col, W the `lags` most recent values of each w column.
TimeSeriesSample load_csv(const std::string& path, const CsvSchema& schema);
TimeSeriesSample table_to_sample(const CsvTable& table,
                                 const CsvSchema& schema);

// Columns w1..wd, y1.., z1.. (single columns are written as w, y, z).
void write_sample_csv(std::ostream& out, const TimeSeriesSample& sample);

}  // namespace npci
