#include "infbeta/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "infbeta/estimation.hpp"

namespace infbeta {

namespace {

constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();

struct Slot {
  std::string target;
  std::string estimator;
};

bool applies(const std::string& target, Family family) {
  if (target == "gamma") return family == Family::Beinf;
  return target == "alpha" || target == "mu" || target == "phi" || target == "mean" ||
         target == "variance";
}

std::vector<Slot> make_slots(const StudyConfig& cfg) {
  static const std::vector<std::string> order{"alpha", "gamma", "mu", "phi", "mean", "variance"};
  std::vector<Slot> slots;
  for (const auto& t : order) {
    if (!applies(t, cfg.family)) continue;
    if (!cfg.targets.empty() && std::find(cfg.targets.begin(), cfg.targets.end(), t) ==
                                    cfg.targets.end())
      continue;
    // alpha-hat and gamma-hat are the ML estimators under either method.
    if (t != "alpha" && t != "gamma") slots.push_back({t, "cm"});
    slots.push_back({t, "ml"});
  }
  return slots;
}

struct PlugIn {
  double mean;
  double variance;
};

// Closed-form E(y), Var(y) at estimated parameters. alpha-hat must be in the
// open interval; gamma-hat may sit on {0, 1}.
PlugIn plug_in(const StudyConfig& cfg, double alpha, double gamma, double mu, double phi) {
  const double v2 = mu * (1.0 - mu) / (phi + 1.0);
  if (cfg.family == Family::Beinf) {
    const double d = gamma - mu;
    return {alpha * gamma + (1.0 - alpha) * mu,
            alpha * gamma * (1.0 - gamma) + (1.0 - alpha) * v2 + alpha * (1.0 - alpha) * d * d};
  }
  const double c = cfg.family == Family::Bezi ? 0.0 : 1.0;
  const double d = c - mu;
  return {alpha * c + (1.0 - alpha) * mu, (1.0 - alpha) * v2 + alpha * (1.0 - alpha) * d * d};
}

std::vector<double> replicate(const StudyConfig& cfg, const std::vector<Slot>& slots,
                              std::size_t n, std::size_t rep) {
  RandomSource rng = RandomSource::substream(cfg.seed, {n, rep});
  const std::vector<double> sample = draw_sample(cfg, n, rng);
  const SuffStats stats = sufficient_stats(sample, cfg.family);

  const double alpha = static_cast<double>(stats.t1) / static_cast<double>(stats.n);
  const bool alpha_open = stats.t1 > 0 && stats.t1 < stats.n;
  const double gamma = mle_gamma(stats).estimate;

  std::optional<MuPhi> cm;
  std::optional<MuPhi> ml;
  try {
    cm = cm_mu_phi(stats);
  } catch (const EstimationError&) {
  }
  try {
    const MuPhiFit f = mle_mu_phi(stats);
    ml = MuPhi{f.mu, f.phi};
  } catch (const EstimationError&) {
  }

  std::vector<double> out(slots.size(), kSkip);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    if (s.target == "alpha") {
      out[i] = alpha;
      continue;
    }
    if (s.target == "gamma") {
      out[i] = gamma;
      continue;
    }
    const std::optional<MuPhi>& est = s.estimator == "ml" ? ml : cm;
    if (!est) continue;
    if (s.target == "mu") {
      out[i] = est->mu;
    } else if (s.target == "phi") {
      out[i] = est->phi;
    } else if (alpha_open) {
      const PlugIn p = plug_in(cfg, alpha, gamma, est->mu, est->phi);
      out[i] = s.target == "mean" ? p.mean : p.variance;
    }
  }
  return out;
}

}  // namespace

void StudyConfig::validate() const {
  if (replications < 1) throw DomainError("study: replications must be at least 1");
  if (sizes.empty()) throw DomainError("study: at least one sample size is required");
  for (std::size_t n : sizes)
    if (n == 0) throw DomainError("study: sample sizes must be positive");
  const BetaParams<double> bp(mu, phi);
  if (family == Family::Beinf) {
    const BeinfParams<double> check(alpha, gamma, bp);
  } else {
    const InflParams<double> check(alpha, InflationPoint::Zero, bp);
  }
  for (const auto& t : targets)
    if (!applies(t, family))
      throw DomainError("study: target '" + t + "' does not apply to " +
                        std::string(family_name(family)));
}

double StudyConfig::truth(const std::string& target) const {
  if (target == "alpha") return alpha;
  if (target == "gamma") return gamma;
  if (target == "mu") return mu;
  if (target == "phi") return phi;
  const BetaParams<double> bp(mu, phi);
  Moments<double> m{};
  if (family == Family::Beinf) {
    m = beinf_moments(1, BeinfParams<double>(alpha, gamma, bp));
  } else {
    m = infl_moments(1, InflParams<double>(alpha,
                                           family == Family::Bezi ? InflationPoint::Zero
                                                                  : InflationPoint::One,
                                           bp));
  }
  if (target == "mean") return m.moment;
  if (target == "variance") return m.variance;
  throw DomainError("study: unknown target '" + target + "'");
}

StudyConfig table1_preset() {
  StudyConfig cfg;
  cfg.family = Family::Bezi;
  cfg.alpha = 0.2;
  cfg.mu = 0.1;
  cfg.phi = 2.0;
  return cfg;
}

StudyConfig table2_preset() {
  StudyConfig cfg = table1_preset();
  cfg.family = Family::Beinf;
  cfg.gamma = 0.3;
  return cfg;
}

std::vector<double> draw_sample(const StudyConfig& cfg, std::size_t n, RandomSource& rng) {
  const BetaParams<double> bp(cfg.mu, cfg.phi);
  std::vector<double> sample(n);
  if (cfg.family == Family::Beinf) {
    const BeinfParams<double> p(cfg.alpha, cfg.gamma, bp);
    for (auto& y : sample) y = beinf_sample(p, rng);
  } else {
    const InflParams<double> p(
        cfg.alpha, cfg.family == Family::Bezi ? InflationPoint::Zero : InflationPoint::One, bp);
    for (auto& y : sample) y = infl_sample(p, rng);
  }
  return sample;
}

std::vector<StudyRow> run_study(const StudyConfig& config) {
  config.validate();
  const std::vector<Slot> slots = make_slots(config);
  const std::size_t reps = config.replications;
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));

  // results[size index][slot] -> aggregated row
  std::vector<StudyRow> by_size_slot;
  by_size_slot.reserve(config.sizes.size() * slots.size());

  for (std::size_t n : config.sizes) {
    std::vector<std::vector<double>> results(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t r = next++; r < reps; r = next++) results[r] = replicate(config, slots, n, r);
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    // Deterministic reduction in replication order.
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const double truth = config.truth(slots[i].target);
      StudyRow row;
      row.target = slots[i].target;
      row.n = n;
      row.estimator = slots[i].estimator;
      double sum = 0.0;
      double sum_sq_err = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double v = results[r][i];
        if (std::isnan(v)) {
          ++row.skipped;
          continue;
        }
        ++row.used;
        sum += v;
        sum_sq_err += (v - truth) * (v - truth);
      }
      if (row.used > 0) {
        const double k = static_cast<double>(row.used);
        row.mean = sum / k;
        row.bias = row.mean - truth;
        row.rmse = std::sqrt(sum_sq_err / k);
      } else {
        row.mean = row.bias = row.rmse = kSkip;
      }
      by_size_slot.push_back(std::move(row));
    }
  }

  // Target-major ordering: target, n, estimator.
  std::vector<StudyRow> rows;
  rows.reserve(by_size_slot.size());
  for (std::size_t first = 0; first < slots.size();) {
    std::size_t last = first;
    while (last < slots.size() && slots[last].target == slots[first].target) ++last;
    for (std::size_t k = 0; k < config.sizes.size(); ++k)
      for (std::size_t i = first; i < last; ++i)
        rows.push_back(by_size_slot[k * slots.size() + i]);
    first = last;
  }
  return rows;
}

}  // namespace infbeta
