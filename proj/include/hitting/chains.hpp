#pragma once

#include <cstdint>
#include <vector>

#include "hitting/innovations.hpp"
#include "hitting/rng.hpp"

namespace hitting {

// Reproducible Monte Carlo for the three chains. ArOne and MaxAr state is
// kept in log_A units throughout; MaxAr is exactly the random exchange
// recursion in that domain.
enum class ChainKind { ArOne, MaxAr, RandomExchange };

struct SimConfig {
  double big_a = 2.0;     // A > 1, contraction a = 1/A
  double x0_log = 0.5;    // threshold in log_A units
  double start_log = 1.5; // must exceed x0_log
  std::int64_t horizon_cap = 1'000'000;
  std::uint64_t master_seed = 0;
  std::int64_t replicates = 1;
  int threads = 1;        // affects speed only, never results

  void validate() const;
};

struct RecurrenceOutcome {
  bool hit = false;
  std::int64_t steps = 0;  // T when hit, the cap when censored
};

struct TailEstimate {
  std::int64_t n = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  std::int64_t replicates = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::int64_t replicates = 0;
};

struct ScaledMarginalSample {
  std::vector<double> values;    // state_{floor(nt)} / n, kept replicates
  std::int64_t kept = 0;
  std::int64_t attempted = 0;
};

// One step of R_n = max(R_{n-1} - 1, eta_n).
inline double step_random_exchange(double r, double eta) {
  return r - 1.0 > eta ? r - 1.0 : eta;
}

// One step of log_A X_n = log_A(A^(l-1) + A^eta), evaluated without
// overflow for any magnitudes.
double step_ar_log(double l, double eta, double big_a);

RecurrenceOutcome simulate_recurrence_time(ChainKind kind,
                                           const InnovationModel& model,
                                           const SimConfig& config,
                                           RngStream& rng);

// P_start(T > n) for each n in n_grid, one path per replicate. Counts are
// integers, replicate substreams are functions of (master_seed, index), so
// the result is identical for any thread count.
std::vector<TailEstimate> estimate_tail(ChainKind kind,
                                        const InnovationModel& model,
                                        const SimConfig& config,
                                        const std::vector<std::int64_t>& n_grid);

// Sample mean of T with normal CI half-width data; throws if any replicate
// is censored (the caller must raise horizon_cap instead of accepting bias).
MeanEstimate estimate_expected_T(ChainKind kind, const InnovationModel& model,
                                 const SimConfig& config);

// Replicate values of state_{floor(n t)} / n; optionally conditioned on
// T > n by rejection (kept counts reported). Throws if nothing is kept.
ScaledMarginalSample sample_scaled_marginal(ChainKind kind,
                                            const InnovationModel& model,
                                            const SimConfig& config, double t,
                                            std::int64_t n,
                                            bool condition_on_survival);

// Monte Carlo estimate of E_x[U0(log_A X_n); T > n] for the AR(1) chain.
MeanEstimate estimate_V(const InnovationModel& model, double big_a,
                        double x0_log, double x_log, std::int64_t n,
                        std::int64_t replicates, std::uint64_t master_seed,
                        int threads = 1);

}  // namespace hitting
