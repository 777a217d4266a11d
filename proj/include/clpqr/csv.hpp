#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "clpqr/data.hpp"

namespace clpqr {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreprocessOptions {
  bool standardize = false;
  bool add_squares = false;
  bool restandardize_squares = true;  // pipeline order: standardize, square, re-standardize
  std::vector<std::string> exclude_columns;
};

// Applied center/scale per final predictor column and for the response, so
// fits can be mapped back to raw units. Untouched columns carry (0, 1).
struct PreprocessReport {
  std::vector<std::string> column_names;
  std::vector<double> means;
  std::vector<double> scales;
  double response_mean = 0.0;
  double response_scale = 1.0;
  std::vector<std::string> constant_columns;  // left unscaled
};

struct LoadedData {
  Dataset data;
  PreprocessReport report;
};

// Header row required, UTF-8, '.' decimal separator, all cells numeric.
// Excluded columns pass through bit-identical and are never squared.
LoadedData load_csv(const std::string& path, const std::string& response_column,
                    const PreprocessOptions& options = {});

}  // namespace clpqr
