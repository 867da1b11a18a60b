#include "infbeta/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

namespace infbeta::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string selector_name(const ColumnSelector& column) {
  if (const auto* idx = std::get_if<std::size_t>(&column)) return std::to_string(*idx);
  return std::get<std::string>(column);
}

double report_value(const FitReport& r, std::string_view name) {
  const auto v = r.estimate(name);
  if (!v) throw DomainError("fit report has no estimate named '" + std::string(name) + "'");
  return *v;
}

bool is_tobit(const FitReport& r) { return r.model.rfind("tobit", 0) == 0; }

TobitParams tobit_params(const FitReport& r) {
  return TobitParams(report_value(r, "mu"), report_value(r, "sigma"),
                     r.model == "tobit-left" ? Censoring::LeftAtZero : Censoring::DoubleZeroOne);
}

BeinfParams<double> beinf_params(const FitReport& r) {
  const BetaParams<double> bp(report_value(r, "mu"), report_value(r, "phi"));
  if (r.estimate("delta0"))
    return from_delta(BeinfDeltaParams<double>(report_value(r, "delta0"),
                                               report_value(r, "delta1"), bp));
  return BeinfParams<double>(report_value(r, "alpha"), report_value(r, "gamma"), bp);
}

InflParams<double> infl_params(const FitReport& r) {
  const BetaParams<double> bp(report_value(r, "mu"), report_value(r, "phi"));
  return InflParams<double>(report_value(r, "alpha"),
                            r.model == "bezi" ? InflationPoint::Zero : InflationPoint::One, bp);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

Dataset read_csv(std::istream& in, const ColumnSelector& column, bool header,
                 const std::string& source) {
  Dataset ds;
  ds.source = source;
  ds.column = selector_name(column);

  std::optional<std::size_t> index;
  if (const auto* idx = std::get_if<std::size_t>(&column)) index = *idx;

  std::string line;
  std::size_t row = 0;
  bool header_pending = header;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_record(line);
    if (header_pending) {
      header_pending = false;
      if (!index) {
        const std::string& name = std::get<std::string>(column);
        for (std::size_t i = 0; i < fields.size(); ++i)
          if (trim(fields[i]) == name) index = i;
        if (!index) throw DataError("column '" + name + "' not found in header of " + source);
      }
      continue;
    }
    if (!index) throw DataError("a column name requires a header row");
    if (*index >= fields.size())
      throw DataError(source + ": row " + std::to_string(row) + " has no column " +
                          std::to_string(*index),
                      row);
    const std::string cell = trim(fields[*index]);
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
      throw DataError(source + ": row " + std::to_string(row) + ": cannot parse '" + cell +
                          "' as a number",
                      row);
    if (!(v >= 0.0 && v <= 1.0))
      throw DataError(source + ": row " + std::to_string(row) + ": value " + cell +
                          " lies outside [0,1]",
                      row);
    ds.values.push_back(v);
  }
  if (ds.values.empty()) throw DataError(source + ": no data values");
  return ds;
}

Dataset read_csv(const std::string& path, const ColumnSelector& column, bool header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, column, header, path);
}

std::vector<double> ecdf_on_grid(std::span<const double> sorted, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (double g : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), g);
    out.push_back(static_cast<double>(it - sorted.begin()) / n);
  }
  return out;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double x = sorted[i];
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == x) ++j;
    const double below = static_cast<double>(i) / n;  // ECDF(x-)
    const double at = static_cast<double>(j) / n;     // ECDF(x)
    d = std::max(d, at - cdf(x));
    d = std::max(d, cdf_left(x) - below);
    i = j;
  }
  return d;
}

std::function<double(double)> fitted_cdf(const FitReport& report) {
  if (is_tobit(report)) {
    const TobitParams p = tobit_params(report);
    return [p](double y) { return tobit_cdf(y, p); };
  }
  if (report.model == "beinf") {
    const BeinfParams<double> p = beinf_params(report);
    return [p](double y) { return beinf_cdf(y, p); };
  }
  const InflParams<double> p = infl_params(report);
  return [p](double y) { return infl_cdf(y, p); };
}

std::function<double(double)> fitted_cdf_left(const FitReport& report) {
  if (is_tobit(report)) {
    const TobitParams p = tobit_params(report);
    return [p](double y) {
      if (y == 0.0) return 0.0;
      if (y == 1.0 && p.censoring == Censoring::DoubleZeroOne) return 1.0 - p.prob_one();
      return tobit_cdf(y, p);
    };
  }
  if (report.model == "beinf") {
    const BeinfParams<double> p = beinf_params(report);
    return [p](double y) {
      if (y == 0.0) return 0.0;
      if (y == 1.0) return 1.0 - p.prob_one();
      return beinf_cdf(y, p);
    };
  }
  const InflParams<double> p = infl_params(report);
  return [p](double y) {
    if (y == p.c()) return p.c() == 0.0 ? 0.0 : 1.0 - p.alpha;
    return infl_cdf(y, p);
  };
}

GofCurve gof_curve(std::span<const double> values, Family family, std::size_t grid_size,
                   bool with_tobit) {
  if (grid_size < 2) throw DomainError("gof: grid size must be at least 2");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const FitReport model = fit(sorted, family, Method::Ml);
  const auto model_cdf = fitted_cdf(model);

  GofCurve curve;
  curve.grid.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    curve.grid[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
  curve.grid.back() = 1.0;
  curve.ecdf = ecdf_on_grid(sorted, curve.grid);
  curve.model_cdf.reserve(grid_size);
  for (double g : curve.grid) curve.model_cdf.push_back(model_cdf(g));
  curve.ks_model = ks_statistic(sorted, model_cdf, fitted_cdf_left(model));

  if (with_tobit) {
    const bool has_ones = !sorted.empty() && sorted.back() == 1.0;
    const Censoring cens = (family == Family::Bezi && !has_ones) ? Censoring::LeftAtZero
                                                                 : Censoring::DoubleZeroOne;
    const TobitFit tf = tobit_fit(sorted, cens);
    const auto tcdf = fitted_cdf(tf.report);
    std::vector<double> col;
    col.reserve(grid_size);
    for (double g : curve.grid) col.push_back(tcdf(g));
    curve.tobit_cdf = std::move(col);
    curve.ks_tobit = ks_statistic(sorted, tcdf, fitted_cdf_left(tf.report));
  }
  return curve;
}

std::string render_fit(const FitReport& r) {
  nlohmann::ordered_json doc;
  doc["family"] = r.model;
  doc["method"] = std::string(method_name(r.method));
  doc["parameterization"] =
      r.parameterization == Parameterization::Delta ? "delta" : "standard";
  doc["n"] = r.n;
  doc["n_zero"] = r.n_zero;
  doc["n_one"] = r.n_one;
  doc["n_interior"] = r.n_interior;
  for (const auto& [name, value] : r.estimates) doc[name] = value;
  for (const auto& [name, value] : r.std_errors) doc["se_" + name] = value;
  doc["loglik"] = r.loglik;
  if (r.convergence) {
    doc["iterations"] = r.convergence->iterations;
    doc["grad_norm"] = r.convergence->grad_norm;
    doc["status"] = std::string(status_name(r.convergence->status));
  }
  if (!r.warnings.empty()) doc["warnings"] = r.warnings;
  return doc.dump(2) + "\n";
}

std::string render_study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "target,n,estimator,mean,bias,rmse,skipped\n";
  for (const auto& r : rows) {
    os << r.target << ',' << r.n << ',' << r.estimator << ',' << format_number(r.mean) << ','
       << format_number(r.bias) << ',' << format_number(r.rmse) << ',' << r.skipped << '\n';
  }
  return os.str();
}

std::string render_study_table(const std::vector<StudyRow>& rows) {
  // Collapse (target, n) into one line with CM and ML side by side.
  struct Line {
    std::string target;
    std::size_t n;
    const StudyRow* cm = nullptr;
    const StudyRow* ml = nullptr;
  };
  std::vector<Line> lines;
  for (const auto& r : rows) {
    if (lines.empty() || lines.back().target != r.target || lines.back().n != r.n)
      lines.push_back({r.target, r.n});
    (r.estimator == "cm" ? lines.back().cm : lines.back().ml) = &r;
  }

  auto cell = [](const StudyRow* r, double StudyRow::*field) {
    std::ostringstream c;
    if (r && std::isfinite(r->*field)) c << std::fixed << std::setprecision(4) << r->*field;
    return c.str();
  };
  auto skips = [](const StudyRow* r) { return r ? std::to_string(r->skipped) : std::string(); };

  std::ostringstream os;
  os << std::left << std::setw(9) << "Par" << std::right << std::setw(6) << "n"
     << std::setw(11) << "CM Mean" << std::setw(11) << "ML Mean" << std::setw(11) << "CM Bias"
     << std::setw(11) << "ML Bias" << std::setw(11) << "CM rMSE" << std::setw(11) << "ML rMSE"
     << std::setw(9) << "CM skip" << std::setw(9) << "ML skip" << '\n';
  std::string prev;
  for (const auto& l : lines) {
    if (!prev.empty() && prev != l.target) os << '\n';
    os << std::left << std::setw(9) << (prev == l.target ? "" : l.target) << std::right
       << std::setw(6) << l.n << std::setw(11) << cell(l.cm, &StudyRow::mean) << std::setw(11)
       << cell(l.ml, &StudyRow::mean) << std::setw(11) << cell(l.cm, &StudyRow::bias)
       << std::setw(11) << cell(l.ml, &StudyRow::bias) << std::setw(11)
       << cell(l.cm, &StudyRow::rmse) << std::setw(11) << cell(l.ml, &StudyRow::rmse)
       << std::setw(9) << skips(l.cm) << std::setw(9) << skips(l.ml) << '\n';
    prev = l.target;
  }
  return os.str();
}

std::string render_gof_csv(const GofCurve& c) {
  std::ostringstream os;
  os << "y,ecdf,model_cdf";
  if (c.tobit_cdf) os << ",tobit_cdf";
  os << '\n';
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    os << format_number(c.grid[i]) << ',' << format_number(c.ecdf[i]) << ','
       << format_number(c.model_cdf[i]);
    if (c.tobit_cdf) os << ',' << format_number((*c.tobit_cdf)[i]);
    os << '\n';
  }
  return os.str();
}

namespace {

ColumnSelector parse_selector(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    return static_cast<std::size_t>(std::stoull(s));
  return s;
}

struct InputOptions {
  std::string path;
  std::string column = "0";
  bool header = false;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("-i,--input", in.path, "CSV file with values in [0,1]")->required();
  cmd->add_option("-c,--column", in.column, "Column index (0-based) or header name")
      ->capture_default_str();
  cmd->add_flag("--header", in.header, "First non-empty row is a header");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero/one-inflated beta distributions: fitting, sampling and simulation studies",
               "infbeta"};
  app.require_subcommand(1);

  // fit
  InputOptions fit_in;
  std::string fit_family = "beinf";
  std::string fit_method = "ml";
  bool fit_delta = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an inflated beta or Tobit model to a CSV column");
  add_input_options(fit_cmd, fit_in);
  fit_cmd
      ->add_option("-f,--family", fit_family, "bezi | beoi | beinf | tobit-left | tobit-double")
      ->check(CLI::IsMember({"bezi", "beoi", "beinf", "tobit-left", "tobit-double"}))
      ->capture_default_str();
  fit_cmd->add_option("-m,--method", fit_method, "ml | cm")
      ->check(CLI::IsMember({"ml", "cm"}))
      ->capture_default_str();
  fit_cmd->add_flag("--delta", fit_delta, "Report BEINF in the (delta0, delta1, mu, phi) form");

  // study
  std::string preset = "table1";
  std::optional<std::string> st_family;
  std::optional<double> st_alpha, st_gamma, st_mu, st_phi;
  std::vector<std::size_t> sizes;
  std::optional<std::size_t> reps;
  std::uint64_t st_seed = 1;
  std::vector<std::string> targets;
  unsigned threads = 0;
  std::string format = "table";
  auto* study_cmd = app.add_subcommand("study", "Monte Carlo study of the ML and CM estimators");
  study_cmd->add_option("-p,--preset", preset, "table1 (BEZI) | table2 (BEINF)")
      ->check(CLI::IsMember({"table1", "table2"}))
      ->capture_default_str();
  study_cmd->add_option("-f,--family", st_family, "Override the preset family")
      ->check(CLI::IsMember({"bezi", "beoi", "beinf"}));
  study_cmd->add_option("--alpha", st_alpha);
  study_cmd->add_option("--gamma", st_gamma);
  study_cmd->add_option("--mu", st_mu);
  study_cmd->add_option("--phi", st_phi);
  study_cmd->add_option("--sizes", sizes, "Sample sizes (default 10 20 50 100 500 1000)");
  study_cmd->add_option("--reps", reps, "Replications per sample size (default 5000)");
  study_cmd->add_option("--seed", st_seed)->capture_default_str();
  study_cmd->add_option("--targets", targets, "alpha gamma mu phi mean variance");
  study_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  study_cmd->add_option("--format", format, "table | csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();

  // gof
  InputOptions gof_in;
  std::string gof_family = "beinf";
  std::size_t grid = 512;
  bool with_tobit = false;
  auto* gof_cmd =
      app.add_subcommand("gof", "Empirical vs fitted CDF on a grid, with KS statistics");
  add_input_options(gof_cmd, gof_in);
  gof_cmd->add_option("-f,--family", gof_family, "bezi | beoi | beinf")
      ->check(CLI::IsMember({"bezi", "beoi", "beinf"}))
      ->capture_default_str();
  gof_cmd->add_option("--grid", grid, "Grid points on [0,1]")->capture_default_str();
  gof_cmd->add_flag("--tobit", with_tobit, "Add the matching Tobit fit");

  // sample
  std::string sm_family = "beinf";
  double sm_alpha = 0.2, sm_gamma = 0.3, sm_mu = 0.1, sm_phi = 2.0;
  std::size_t sm_n = 0;
  std::uint64_t sm_seed = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Draw values, one per line");
  sample_cmd->add_option("-f,--family", sm_family, "bezi | beoi | beinf")
      ->check(CLI::IsMember({"bezi", "beoi", "beinf"}))
      ->capture_default_str();
  sample_cmd->add_option("--alpha", sm_alpha)->capture_default_str();
  sample_cmd->add_option("--gamma", sm_gamma)->capture_default_str();
  sample_cmd->add_option("--mu", sm_mu)->capture_default_str();
  sample_cmd->add_option("--phi", sm_phi)->capture_default_str();
  sample_cmd->add_option("-n", sm_n, "Number of draws")->required();
  sample_cmd->add_option("--seed", sm_seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }

  try {
    if (*fit_cmd) {
      const Dataset ds = read_csv(fit_in.path, parse_selector(fit_in.column), fit_in.header);
      if (fit_family == "tobit-left" || fit_family == "tobit-double") {
        const auto tf = tobit_fit(ds.values, fit_family == "tobit-left" ? Censoring::LeftAtZero
                                                                        : Censoring::DoubleZeroOne);
        out << render_fit(tf.report);
      } else {
        const FitReport r = fit(ds.values, parse_family(fit_family),
                                fit_method == "ml" ? Method::Ml : Method::Cm,
                                fit_delta ? Parameterization::Delta : Parameterization::Standard);
        out << render_fit(r);
      }
    } else if (*study_cmd) {
      StudyConfig cfg = preset == "table2" ? table2_preset() : table1_preset();
      if (st_family) cfg.family = parse_family(*st_family);
      if (st_alpha) cfg.alpha = *st_alpha;
      if (st_gamma) cfg.gamma = *st_gamma;
      if (st_mu) cfg.mu = *st_mu;
      if (st_phi) cfg.phi = *st_phi;
      if (!sizes.empty()) cfg.sizes = sizes;
      if (reps) cfg.replications = *reps;
      cfg.seed = st_seed;
      cfg.targets = targets;
      cfg.threads = threads;
      const auto rows = run_study(cfg);
      out << (format == "csv" ? render_study_csv(rows) : render_study_table(rows));
    } else if (*gof_cmd) {
      const Dataset ds = read_csv(gof_in.path, parse_selector(gof_in.column), gof_in.header);
      const GofCurve c = gof_curve(ds.values, parse_family(gof_family), grid, with_tobit);
      out << render_gof_csv(c);
      err << "ks_model=" << format_number(c.ks_model) << '\n';
      if (c.ks_tobit) err << "ks_tobit=" << format_number(*c.ks_tobit) << '\n';
    } else if (*sample_cmd) {
      const Family fam = parse_family(sm_family);
      const BetaParams<double> bp(sm_mu, sm_phi);
      RandomSource rng(sm_seed);
      if (fam == Family::Beinf) {
        const BeinfParams<double> p(sm_alpha, sm_gamma, bp);
        for (std::size_t i = 0; i < sm_n; ++i) out << format_number(beinf_sample(p, rng)) << '\n';
      } else {
        const InflParams<double> p(
            sm_alpha, fam == Family::Bezi ? InflationPoint::Zero : InflationPoint::One, bp);
        for (std::size_t i = 0; i < sm_n; ++i) out << format_number(infl_sample(p, rng)) << '\n';
      }
    }
  } catch (const EstimationError& e) {
    err << "estimation error: " << e.what() << '\n';
    return kEstimationError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace infbeta::cli
