#include "gridge/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gridge {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

RegressionData read_csv(const std::string& path, const std::string& response) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  const auto header = split_line(line);
  Index resp_idx = -1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const auto name = trim(header[j]);
    if (name == response) {
      resp_idx = static_cast<Index>(j);
    } else {
      names.push_back(name);
    }
  }
  if (resp_idx < 0) throw InputError(path + ": response column '" + response + "' not found");

  std::vector<std::vector<double>> xrows;
  std::vector<double> yvals;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(header.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto cell = trim(cells[j]);
      if (cell.empty() || cell == "NA" || cell == "nan")
        throw InputError(path + ":" + std::to_string(lineno) + ": missing value in column '" +
                         trim(header[j]) + "'");
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw InputError(path + ":" + std::to_string(lineno) + ": non-numeric value '" + cell +
                         "' in column '" + trim(header[j]) + "'");
      if (static_cast<Index>(j) == resp_idx) {
        yvals.push_back(v);
      } else {
        row.push_back(v);
      }
    }
    xrows.push_back(std::move(row));
  }
  if (xrows.size() < 2) throw InputError(path + ": need at least two data rows");

  Matrix X(static_cast<Index>(xrows.size()), static_cast<Index>(names.size()));
  Vector Y(static_cast<Index>(yvals.size()));
  for (Index i = 0; i < X.rows(); ++i) {
    Y(i) = yvals[static_cast<std::size_t>(i)];
    for (Index j = 0; j < X.cols(); ++j)
      X(i, j) = xrows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  RegressionData data(std::move(X), std::move(Y));
  data.column_names = std::move(names);
  return data;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void write_csv(const std::string& path, const std::string& meta, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw InputError("cannot write " + path);
  if (!meta.empty()) out << "# " << meta << "\n";
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out << ',';
    out << table.header[j];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
}

}  // namespace gridge
