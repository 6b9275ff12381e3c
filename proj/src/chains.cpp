#include "hitting/chains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hitting/exact_r.hpp"

namespace hitting {

namespace {

// Runs body(replicate_index, stream) for every replicate; partitioning is
// by index only, so results written per index are scheduling-independent.
template <typename Body>
void for_each_replicate(std::int64_t replicates, std::uint64_t master_seed,
                        int threads, const Body& body) {
  if (threads < 1) threads = 1;
  if (threads == 1) {
    for (std::int64_t i = 0; i < replicates; ++i) {
      RngStream rng(master_seed, static_cast<std::uint64_t>(i));
      body(i, rng);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::int64_t chunk = (replicates + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min(replicates, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(i));
        body(i, rng);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double step_state(ChainKind kind, double state_log, double eta, double big_a) {
  if (kind == ChainKind::ArOne) return step_ar_log(state_log, eta, big_a);
  return step_random_exchange(state_log, eta);
}

}  // namespace

void SimConfig::validate() const {
  if (!(big_a > 1.0)) throw std::invalid_argument("SimConfig: A must be > 1");
  if (!(start_log > x0_log))
    throw std::invalid_argument("SimConfig: start_log must exceed x0_log");
  if (horizon_cap < 1)
    throw std::invalid_argument("SimConfig: horizon_cap must be >= 1");
  if (replicates < 1)
    throw std::invalid_argument("SimConfig: replicates must be >= 1");
}

double step_ar_log(double l, double eta, double big_a) {
  const double hi = std::max(l - 1.0, eta);
  const double gap = std::abs(l - 1.0 - eta);
  const double log_a = std::log(big_a);
  return hi + std::log1p(std::exp(-gap * log_a)) / log_a;
}

RecurrenceOutcome simulate_recurrence_time(ChainKind kind,
                                           const InnovationModel& model,
                                           const SimConfig& config,
                                           RngStream& rng) {
  config.validate();
  double state = config.start_log;
  for (std::int64_t n = 1; n <= config.horizon_cap; ++n) {
    state = step_state(kind, state, sample(model, rng), config.big_a);
    if (state <= config.x0_log) return {true, n};
  }
  return {false, config.horizon_cap};
}

std::vector<TailEstimate> estimate_tail(
    ChainKind kind, const InnovationModel& model, const SimConfig& config,
    const std::vector<std::int64_t>& n_grid) {
  config.validate();
  if (n_grid.empty()) throw std::invalid_argument("estimate_tail: empty grid");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] > n_grid[i + 1])
      throw std::invalid_argument("estimate_tail: n_grid must be sorted");
  const std::int64_t n_max = n_grid.back();
  if (n_max > config.horizon_cap)
    throw std::invalid_argument("estimate_tail: grid exceeds horizon_cap");

  // surviving[i] = index into n_grid of the largest n with T > n, or -1.
  std::vector<int> level(config.replicates, -1);
  for_each_replicate(
      config.replicates, config.master_seed, config.threads,
      [&](std::int64_t i, RngStream& rng) {
        double state = config.start_log;
        std::int64_t survived_to = 0;
        for (std::int64_t n = 1; n <= n_max; ++n) {
          state = step_state(kind, state, sample(model, rng), config.big_a);
          if (state <= config.x0_log) break;
          survived_to = n;
        }
        int lv = -1;
        for (std::size_t g = 0; g < n_grid.size(); ++g)
          if (n_grid[g] <= survived_to) lv = static_cast<int>(g);
        level[i] = lv;
      });

  // Integer counts, accumulated sequentially: order-independent by value.
  std::vector<std::int64_t> counts(n_grid.size(), 0);
  for (std::int64_t i = 0; i < config.replicates; ++i)
    for (int g = 0; g <= level[i]; ++g) ++counts[g];

  std::vector<TailEstimate> out;
  out.reserve(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const double p = (n_grid[g] == 0)
                         ? 1.0
                         : static_cast<double>(counts[g]) /
                               static_cast<double>(config.replicates);
    out.push_back({n_grid[g], p,
                   std::sqrt(p * (1.0 - p) /
                             static_cast<double>(config.replicates)),
                   config.replicates});
  }
  return out;
}

MeanEstimate estimate_expected_T(ChainKind kind, const InnovationModel& model,
                                 const SimConfig& config) {
  config.validate();
  std::vector<std::int64_t> times(config.replicates, 0);
  std::vector<char> censored(config.replicates, 0);
  for_each_replicate(config.replicates, config.master_seed, config.threads,
                     [&](std::int64_t i, RngStream& rng) {
                       const auto outcome =
                           simulate_recurrence_time(kind, model, config, rng);
                       times[i] = outcome.steps;
                       censored[i] = outcome.hit ? 0 : 1;
                     });
  for (std::int64_t i = 0; i < config.replicates; ++i)
    if (censored[i])
      throw std::runtime_error(
          "estimate_expected_T: censored replicate; raise horizon_cap");
  long double sum = 0.0L, sumsq = 0.0L;
  for (std::int64_t i = 0; i < config.replicates; ++i) {
    sum += times[i];
    sumsq += static_cast<long double>(times[i]) * times[i];
  }
  const double n = static_cast<double>(config.replicates);
  const double mean = static_cast<double>(sum / config.replicates);
  const double var =
      std::max(0.0, static_cast<double>(sumsq / config.replicates) -
                        mean * mean);
  return {mean, std::sqrt(var / n), config.replicates};
}

ScaledMarginalSample sample_scaled_marginal(ChainKind kind,
                                            const InnovationModel& model,
                                            const SimConfig& config, double t,
                                            std::int64_t n,
                                            bool condition_on_survival) {
  config.validate();
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("sample_scaled_marginal: t must be in (0,1]");
  const std::int64_t nt = static_cast<std::int64_t>(std::floor(n * t));
  if (nt < 1)
    throw std::invalid_argument("sample_scaled_marginal: floor(n t) >= 1");

  std::vector<double> values(config.replicates);
  std::vector<char> keep(config.replicates, 1);
  for_each_replicate(
      config.replicates, config.master_seed, config.threads,
      [&](std::int64_t i, RngStream& rng) {
        double state = config.start_log;
        double at_nt = config.start_log;
        bool alive = true;
        const std::int64_t horizon = condition_on_survival ? n : nt;
        for (std::int64_t k = 1; k <= horizon; ++k) {
          state = step_state(kind, state, sample(model, rng), config.big_a);
          if (state <= config.x0_log) alive = false;
          if (k == nt) at_nt = state;
        }
        values[i] = at_nt / static_cast<double>(n);
        keep[i] = (!condition_on_survival || alive) ? 1 : 0;
      });

  ScaledMarginalSample out;
  out.attempted = config.replicates;
  for (std::int64_t i = 0; i < config.replicates; ++i)
    if (keep[i]) out.values.push_back(values[i]);
  out.kept = static_cast<std::int64_t>(out.values.size());
  if (out.kept == 0)
    throw std::runtime_error(
        "sample_scaled_marginal: no replicate survived the conditioning");
  return out;
}

MeanEstimate estimate_V(const InnovationModel& model, double big_a,
                        double x0_log, double x_log, std::int64_t n,
                        std::int64_t replicates, std::uint64_t master_seed,
                        int threads) {
  if (!(x_log > x0_log))
    throw std::invalid_argument("estimate_V: x_log must exceed x0_log");
  if (!(big_a > 1.0) || n < 1 || replicates < 1)
    throw std::invalid_argument("estimate_V: bad parameters");

  std::vector<double> values(replicates, 0.0);
  for_each_replicate(replicates, master_seed, threads,
                     [&](std::int64_t i, RngStream& rng) {
                       double state = x_log;
                       for (std::int64_t k = 1; k <= n; ++k) {
                         state = step_ar_log(state, sample(model, rng), big_a);
                         if (state <= x0_log) return;  // killed, contributes 0
                       }
                       values[i] = u0_integral(model, state);
                     });
  long double sum = 0.0L, sumsq = 0.0L;
  for (double v : values) {
    sum += v;
    sumsq += static_cast<long double>(v) * v;
  }
  const double mean = static_cast<double>(sum / replicates);
  const double var = std::max(
      0.0, static_cast<double>(sumsq / replicates) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(replicates)), replicates};
}

}  // namespace hitting
