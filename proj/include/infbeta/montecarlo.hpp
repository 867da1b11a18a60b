#ifndef INFBETA_MONTECARLO_HPP
#define INFBETA_MONTECARLO_HPP

// Finite-sample study of the ML and conditional-moment (CM) estimators.
//
// For every sample size n and replication r a sample is drawn from the
// substream keyed by (seed, n, r), so results do not depend on the number of
// worker threads.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "infbeta/inflated.hpp"

namespace infbeta {

struct StudyConfig {
  Family family = Family::Bezi;
  double alpha = 0.2;
  double gamma = 0.3;  // BEINF only
  double mu = 0.1;
  double phi = 2.0;
  std::vector<std::size_t> sizes{10, 20, 50, 100, 500, 1000};
  std::size_t replications = 5000;
  std::uint64_t seed = 1;
  // Subset of {"alpha", "gamma", "mu", "phi", "mean", "variance"}; empty
  // means all targets that apply to the family.
  std::vector<std::string> targets;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
  double truth(const std::string& target) const;
};

StudyConfig table1_preset();
StudyConfig table2_preset();

struct StudyRow {
  std::string target;
  std::size_t n = 0;
  std::string estimator;  // "cm" or "ml"
  double mean = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  std::size_t skipped = 0;
  // Replications that contributed.
  std::size_t used = 0;
};

std::vector<StudyRow> run_study(const StudyConfig& config);

/// Draws one sample of size n from the configured family.
std::vector<double> draw_sample(const StudyConfig& config, std::size_t n, RandomSource& rng);

}  // namespace infbeta

#endif  // INFBETA_MONTECARLO_HPP
