#include "clpqr/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace clpqr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, long row, const std::string& col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("non-numeric cell in column '" + col + "' at data row " +
                    std::to_string(row));
  }
}

// Center to mean 0, scale to unit sample variance (T-1 denominator).
// Constant columns are reported and left unscaled.
bool standardize_column(Eigen::Ref<Eigen::VectorXd> col, double& mean, double& scale) {
  const double n = static_cast<double>(col.size());
  mean = col.mean();
  const double var = n > 1.0 ? (col.array() - mean).square().sum() / (n - 1.0) : 0.0;
  if (var <= 0.0) {
    mean = 0.0;
    scale = 1.0;
    return false;
  }
  scale = std::sqrt(var);
  col = (col.array() - mean) / scale;
  return true;
}

}  // namespace

LoadedData load_csv(const std::string& path, const std::string& response_column,
                    const PreprocessOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const std::vector<std::string> header = split_line(line);
  if (header.empty()) throw DataError("empty header row");

  long response_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == response_column) response_idx = static_cast<long>(i);
  if (response_idx < 0) throw DataError("response column '" + response_column + "' not found");

  std::vector<std::vector<double>> rows;
  long row_number = 0;
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    ++row_number;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(row_number) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    std::vector<double> vals(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      vals[i] = parse_cell(cells[i], row_number, header[i]);
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);

  const long T = static_cast<long>(rows.size());
  const long m = static_cast<long>(header.size()) - 1;
  if (m < 1) throw DataError("no predictor columns");

  LoadedData out;
  out.data.X.resize(T, m);
  out.data.y.resize(T);
  std::vector<std::string> names;
  long col = 0;
  for (long i = 0; i < static_cast<long>(header.size()); ++i) {
    if (i == response_idx) continue;
    names.push_back(header[i]);
    for (long t = 0; t < T; ++t) out.data.X(t, col) = rows[t][i];
    ++col;
  }
  for (long t = 0; t < T; ++t) out.data.y[t] = rows[t][response_idx];

  const auto excluded = [&](const std::string& name) {
    return std::find(options.exclude_columns.begin(), options.exclude_columns.end(), name) !=
           options.exclude_columns.end();
  };

  std::vector<double> means(m, 0.0), scales(m, 1.0);
  if (options.standardize) {
    for (long j = 0; j < m; ++j) {
      if (excluded(names[j])) continue;
      if (!standardize_column(out.data.X.col(j), means[j], scales[j]))
        out.report.constant_columns.push_back(names[j]);
    }
    standardize_column(out.data.y, out.report.response_mean, out.report.response_scale);
  }

  if (options.add_squares) {
    std::vector<long> to_square;
    for (long j = 0; j < m; ++j)
      if (!excluded(names[j])) to_square.push_back(j);
    const long m2 = m + static_cast<long>(to_square.size());
    Eigen::MatrixXd X2(T, m2);
    X2.leftCols(m) = out.data.X;
    long k = m;
    for (long j : to_square) {
      X2.col(k) = out.data.X.col(j).array().square();
      names.push_back(names[j] + "^2");
      means.push_back(0.0);
      scales.push_back(1.0);
      if (options.standardize && options.restandardize_squares) {
        if (!standardize_column(X2.col(k), means[k], scales[k]))
          out.report.constant_columns.push_back(names[k]);
      }
      ++k;
    }
    out.data.X = std::move(X2);
  }

  out.data.column_names = names;
  out.report.column_names = names;
  out.report.means = std::move(means);
  out.report.scales = std::move(scales);
  out.data.validate();
  return out;
}

}  // namespace clpqr
