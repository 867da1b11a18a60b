#ifndef INFBETA_CLI_HPP
#define INFBETA_CLI_HPP

// Command-line layer: CSV ingestion, goodness-of-fit curves and rendering of
// fit reports and study tables. `run` is the whole CLI, callable in-process.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "infbeta/estimation.hpp"
#include "infbeta/montecarlo.hpp"
#include "infbeta/tobit.hpp"

namespace infbeta::cli {

enum ExitCode : int { kOk = 0, kDataError = 2, kEstimationError = 3 };

struct Dataset {
  std::vector<double> values;
  std::string source;
  std::string column;
};

// Zero-based column index or header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

Dataset read_csv(const std::string& path, const ColumnSelector& column = std::size_t{0},
                 bool header = false);
Dataset read_csv(std::istream& in, const ColumnSelector& column = std::size_t{0},
                 bool header = false, const std::string& source = "<stream>");

// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_record(const std::string& line);

struct GofCurve {
  std::vector<double> grid;
  std::vector<double> ecdf;
  std::vector<double> model_cdf;
  std::optional<std::vector<double>> tobit_cdf;
  double ks_model = 0.0;
  std::optional<double> ks_tobit;
};

/// Right-continuous ECDF of `sorted` evaluated at each grid point.
std::vector<double> ecdf_on_grid(std::span<const double> sorted, std::span<const double> grid);

/// Kolmogorov-Smirnov distance between the ECDF of `sorted` and a CDF that may
/// have atoms: `cdf_left(x)` is the left limit F(x-).
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left);

/// CDF (and its left limit) of a fitted inflated-beta report.
std::function<double(double)> fitted_cdf(const FitReport& report);
std::function<double(double)> fitted_cdf_left(const FitReport& report);

/// Fits `family` (ML) and optionally the matching Tobit model, then tabulates
/// ECDF and fitted CDFs on a uniform grid over [0,1] of `grid_size` points.
GofCurve gof_curve(std::span<const double> values, Family family, std::size_t grid_size = 512,
                   bool with_tobit = false);

std::string render_fit(const FitReport& report);
std::string render_study_csv(const std::vector<StudyRow>& rows);
std::string render_study_table(const std::vector<StudyRow>& rows);
std::string render_gof_csv(const GofCurve& curve);

// 17 significant digits.
std::string format_number(double v);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infbeta::cli

#endif  // INFBETA_CLI_HPP
