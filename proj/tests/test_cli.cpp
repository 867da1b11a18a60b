#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "infbeta/cli.hpp"
#include "oracles.hpp"

using namespace infbeta;
using namespace infbeta::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "infbeta");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("infbeta_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

std::vector<double> parse_lines(const std::string& s) {
  std::vector<double> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(std::stod(line));
  return v;
}

std::string join_lines(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += format_number(x) + "\n";
  return s;
}

std::vector<double> beinf_draws(std::size_t n, std::uint64_t seed) {
  return parse_lines(invoke({"sample", "-f", "beinf", "--alpha", "0.2", "--gamma", "0.3", "--mu",
                             "0.1", "--phi", "2", "-n", std::to_string(n), "--seed",
                             std::to_string(seed)})
                         .out);
}

}  // namespace

TEST_CASE("read_csv") {
  std::istringstream plain("0\n0.5\n1\n");
  CHECK(read_csv(plain).values == std::vector<double>{0.0, 0.5, 1.0});

  std::istringstream blank("\n0.25\n\n0.75\n");
  CHECK(read_csv(blank).values == std::vector<double>{0.25, 0.75});

  std::istringstream header("id,y\n1,0.2\n2,0.4\n");
  const auto by_name = read_csv(header, std::string("y"), true);
  CHECK(by_name.values == std::vector<double>{0.2, 0.4});

  std::istringstream by_index("x,y\n0.1,0.3\n", std::ios::in);
  CHECK(read_csv(by_index, std::size_t{1}, true).values == std::vector<double>{0.3});

  std::istringstream quoted("\"name, with comma\",\"0.6\"\n");
  CHECK(read_csv(quoted, std::size_t{1}).values == std::vector<double>{0.6});

  std::istringstream outside("0.3\n1.2\n");
  try {
    read_csv(outside);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.index() == 2);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }

  std::istringstream junk("0.3\nabc\n");
  CHECK_THROWS_AS(read_csv(junk), DataError);
  std::istringstream short_row("0.3,0.4\n0.5\n");
  CHECK_THROWS_AS(read_csv(short_row, std::size_t{1}), DataError);
  std::istringstream no_header("0.3\n");
  CHECK_THROWS_AS(read_csv(no_header, std::string("y")), DataError);
  std::istringstream missing("a,b\n0.3,0.4\n");
  CHECK_THROWS_AS(read_csv(missing, std::string("y"), true), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), DataError);
  CHECK_THROWS_AS(read_csv(std::string("/nonexistent/infbeta.csv")), DataError);
}

TEST_CASE("split_csv_record") {
  CHECK(split_csv_record("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_record("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(split_csv_record("\"x,y\",z") == std::vector<std::string>{"x,y", "z"});
  CHECK(split_csv_record("\"say \"\"hi\"\"\",1") == std::vector<std::string>{"say \"hi\"", "1"});
}

TEST_CASE("ecdf_on_grid and ks_statistic") {
  const std::vector<double> one{0.5};
  const std::vector<double> grid{0.0, 0.49, 0.5, 0.51, 1.0};
  CHECK(ecdf_on_grid(one, grid) == std::vector<double>{0.0, 0.0, 1.0, 1.0, 1.0});

  const std::vector<double> sorted{0.1, 0.2, 0.2, 0.7};
  CHECK(ecdf_on_grid(sorted, std::vector<double>{0.2})[0] == 0.75);

  // Uniform CDF: the largest gap is ECDF(0.2) - 0.2 = 0.55.
  const auto uniform = [](double y) { return y; };
  CHECK(ks_statistic(sorted, uniform, uniform) == doctest::Approx(0.55).epsilon(1e-15));

  // A point mass at 0 matched exactly gives zero distance.
  const std::vector<double> zeros(5, 0.0);
  CHECK(ks_statistic(zeros, [](double) { return 1.0; }, [](double) { return 0.0; }) == 0.0);

  // Brute force over the sample points and their left limits.
  const auto sample = beinf_draws(400, 3);
  std::vector<double> s = sample;
  std::sort(s.begin(), s.end());
  const FitReport r = fit(s, Family::Beinf);
  const auto F = fitted_cdf(r);
  const auto F_left = fitted_cdf_left(r);
  double brute = 0.0;
  for (double x : s) {
    const double at = static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) / s.size();
    const double below = static_cast<double>(std::lower_bound(s.begin(), s.end(), x) - s.begin()) / s.size();
    brute = std::max({brute, std::abs(at - F(x)), std::abs(F_left(x) - below)});
  }
  CHECK(ks_statistic(s, F, F_left) == doctest::Approx(brute).epsilon(1e-14));
  CHECK(F_left(0.0) == 0.0);
  CHECK(F(1.0) == 1.0);
  CHECK(F_left(1.0) == doctest::Approx(1.0 - *r.estimate("alpha") * *r.estimate("gamma")));
}

TEST_CASE("render_fit keys") {
  const auto sample = beinf_draws(500, 5);
  const auto doc = nlohmann::json::parse(render_fit(fit(sample, Family::Beinf)));
  for (const char* key : {"family", "method", "parameterization", "n", "n_zero", "n_one",
                          "n_interior", "alpha", "gamma", "mu", "phi", "mean", "variance",
                          "se_alpha", "se_gamma", "se_mu", "se_phi", "se_mean", "se_variance",
                          "loglik", "iterations", "grad_norm", "status"})
    CHECK_MESSAGE(doc.contains(key), key);
  CHECK(doc["family"] == "beinf");
  CHECK(doc["status"] == "converged");
  CHECK(doc["n"] == 500);

  const auto cm = nlohmann::json::parse(render_fit(fit(sample, Family::Beinf, Method::Cm)));
  CHECK(cm["method"] == "cm");
  CHECK_FALSE(cm.contains("iterations"));
  CHECK_FALSE(cm.contains("se_mu"));
}

TEST_CASE("format_number round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 0.0, 1.0, 2.718281828459045, 1e-300})
    CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("run: exit codes") {
  CHECK(invoke({}).code == kDataError);
  CHECK(invoke({"--help"}).code == kOk);
  CHECK(invoke({"fit"}).code == kDataError);
  CHECK(invoke({"fit", "-i", "/nonexistent/x.csv"}).code == kDataError);

  const TempFile bad("0.3\n1.7\n");
  const auto out_of_range = invoke({"fit", "-i", bad.path()});
  CHECK(out_of_range.code == kDataError);
  CHECK(out_of_range.err.find("row 2") != std::string::npos);

  const TempFile with_one("0\n0.2\n0.4\n1\n");
  CHECK(invoke({"fit", "-i", with_one.path(), "-f", "bezi"}).code == kDataError);

  // Zeros but no ones: gamma-hat sits on the boundary.
  const TempFile no_ones("0\n0\n0.2\n0.4\n0.3\n");
  CHECK(invoke({"fit", "-i", no_ones.path(), "-f", "beinf"}).code == kEstimationError);
  CHECK(invoke({"fit", "-i", no_ones.path(), "-f", "bezi"}).code == kOk);

  CHECK(invoke({"fit", "-i", no_ones.path(), "-f", "nope"}).code == kDataError);
  CHECK(invoke({"gof", "-i", no_ones.path(), "-f", "bezi", "--grid", "1"}).code == kDataError);
  CHECK(invoke({"sample", "-n", "5", "--seed", "1", "--phi", "-1"}).code == kDataError);
}

TEST_CASE("run sample") {
  const auto empty = invoke({"sample", "-n", "0", "--seed", "1"});
  CHECK(empty.code == kOk);
  CHECK(empty.out.empty());

  const auto a = invoke({"sample", "-n", "50", "--seed", "9"});
  const auto b = invoke({"sample", "-n", "50", "--seed", "9"});
  CHECK(a.out == b.out);
  CHECK(a.out != invoke({"sample", "-n", "50", "--seed", "10"}).out);

  const auto v = beinf_draws(100'000, 21);
  REQUIRE(v.size() == 100'000);
  const double n = static_cast<double>(v.size());
  const double p0 = 0.2 * 0.7, p1 = 0.2 * 0.3;
  const double zeros = static_cast<double>(std::count(v.begin(), v.end(), 0.0));
  const double ones = static_cast<double>(std::count(v.begin(), v.end(), 1.0));
  CHECK(std::abs(zeros / n - p0) < 4.0 * std::sqrt(p0 * (1.0 - p0) / n));
  CHECK(std::abs(ones / n - p1) < 4.0 * std::sqrt(p1 * (1.0 - p1) / n));

  const auto bezi = parse_lines(
      invoke({"sample", "-f", "bezi", "--alpha", "0.4", "-n", "2000", "--seed", "2"}).out);
  CHECK(std::count(bezi.begin(), bezi.end(), 1.0) == 0);
  CHECK(std::count(bezi.begin(), bezi.end(), 0.0) > 0);
  const auto beoi = parse_lines(
      invoke({"sample", "-f", "beoi", "--alpha", "0.4", "-n", "2000", "--seed", "2"}).out);
  CHECK(std::count(beoi.begin(), beoi.end(), 0.0) == 0);
  CHECK(std::count(beoi.begin(), beoi.end(), 1.0) > 0);
}

TEST_CASE("run fit: round trip and delta form") {
  const auto v = beinf_draws(100'000, 31);
  const TempFile data(join_lines(v));
  const auto res = invoke({"fit", "-i", data.path()});
  REQUIRE(res.code == kOk);
  const auto doc = nlohmann::json::parse(res.out);
  const std::vector<std::pair<std::string, double>> truth{
      {"alpha", 0.2}, {"gamma", 0.3}, {"mu", 0.1}, {"phi", 2.0}};
  for (const auto& [name, value] : truth) {
    CAPTURE(name);
    CHECK(std::abs(doc[name].get<double>() - value) < 4.0 * doc["se_" + name].get<double>());
  }

  const auto delta = nlohmann::json::parse(invoke({"fit", "-i", data.path(), "--delta"}).out);
  CHECK(delta["parameterization"] == "delta");
  const double n = delta["n"].get<double>();
  CHECK(delta["delta0"].get<double>() == delta["n_zero"].get<double>() / n);
  CHECK(delta["delta1"].get<double>() == delta["n_one"].get<double>() / n);
  CHECK(delta["mu"].get<double>() == doc["mu"].get<double>());
  CHECK(delta.contains("se_delta0"));

  CHECK(invoke({"fit", "-i", data.path(), "-f", "bezi", "--delta"}).code == kDataError);

  const TempFile named("id,y\n1,0.2\n2,0\n3,0.45\n4,0.31\n5,0\n6,0.12\n");
  const auto cm = invoke({"fit", "-i", named.path(), "--header", "-c", "y", "-f", "bezi", "-m", "cm"});
  REQUIRE(cm.code == kOk);
  const auto cm_doc = nlohmann::json::parse(cm.out);
  CHECK(cm_doc["n"] == 6);
  CHECK(cm_doc["alpha"].get<double>() == doctest::Approx(2.0 / 6.0));

  const TempFile censored("0\n0.2\n0.35\n0.5\n0\n0.62\n1\n0.41\n");
  const auto tobit = nlohmann::json::parse(invoke({"fit", "-i", censored.path(), "-f", "tobit-double"}).out);
  CHECK(tobit["family"] == "tobit-double");
  CHECK(tobit.contains("sigma"));
}

TEST_CASE("run study") {
  const std::vector<std::string> args{"study", "-p", "table2", "--sizes", "20", "50",
                                      "--reps", "60", "--seed", "4", "--format", "csv"};
  const auto a = invoke(args);
  REQUIRE(a.code == kOk);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "2"});
  CHECK(invoke(threaded).out == a.out);
  CHECK(a.out.rfind("target,n,estimator,mean,bias,rmse,skipped\n", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 1 + 2 * (2 + 4 * 2));

  const auto one = invoke({"study", "--sizes", "30", "--reps", "1", "--targets", "phi"});
  CHECK(one.code == kOk);
  CHECK(one.out.find("phi") != std::string::npos);

  CHECK(invoke({"study", "--reps", "0"}).code == kDataError);
  CHECK(invoke({"study", "-p", "bogus"}).code == kDataError);
}

TEST_CASE("run gof") {
  const auto v = beinf_draws(10'000, 41);
  const TempFile data(join_lines(v));

  const auto plain = invoke({"gof", "-i", data.path(), "--grid", "101"});
  REQUIRE(plain.code == kOk);
  CHECK(plain.out.rfind("y,ecdf,model_cdf\n", 0) == 0);
  CHECK(std::count(plain.out.begin(), plain.out.end(), '\n') == 102);
  CHECK(plain.err.find("ks_tobit") == std::string::npos);

  const auto with_tobit = invoke({"gof", "-i", data.path(), "--grid", "101", "--tobit"});
  REQUIRE(with_tobit.code == kOk);
  CHECK(with_tobit.out.rfind("y,ecdf,model_cdf,tobit_cdf\n", 0) == 0);
  CHECK(with_tobit.err.find("ks_tobit=") != std::string::npos);

  // KS against the generating distribution.
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  const BeinfParams<double> truth(0.2, 0.3, BetaParams<double>(0.1, 2.0));
  const double d = ks_statistic(
      s, [&](double y) { return beinf_cdf(y, truth); },
      [&](double y) {
        if (y == 0.0) return 0.0;
        if (y == 1.0) return 1.0 - truth.prob_one();
        return beinf_cdf(y, truth);
      });
  CHECK(d < oracle::ks_critical_1pct(s.size()));

  const GofCurve c = gof_curve(v, Family::Beinf, 64, true);
  CHECK(c.grid.front() == 0.0);
  CHECK(c.grid.back() == 1.0);
  CHECK(c.ks_model < oracle::ks_critical_1pct(s.size()));
  CHECK(c.ks_tobit.has_value());
  CHECK(*c.ks_tobit > c.ks_model);
  CHECK(c.model_cdf.back() == 1.0);
  CHECK(c.ecdf.back() == 1.0);
  for (std::size_t i = 1; i < c.grid.size(); ++i) CHECK(c.model_cdf[i] >= c.model_cdf[i - 1]);
}
