#pragma once

#include <string>
#include <vector>

#include "gridge/data.hpp"
#include "gridge/types.hpp"

namespace gridge {

/// Reads a CSV with a mandatory header row. `response` names the Y column;
/// every other column becomes a predictor, in file order. Missing or
/// non-numeric cells are rejected with row/column diagnostics.
RegressionData read_csv(const std::string& path, const std::string& response);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Writes a table with a single metadata comment line on top
/// ("# gridge v... seed=... config=..."). '.' decimal, comma delimiter, LF.
void write_csv(const std::string& path, const std::string& meta, const CsvTable& table);

std::string format_double(double v);

}  // namespace gridge
