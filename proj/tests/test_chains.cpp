#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hitting/chains.hpp"
#include "hitting/exact_r.hpp"

using namespace hitting;

namespace {

const InnovationModel kCanonical = DiscreteInteger{{0.5, 0.2, 0.1, 0.1, 0.1}};
const InnovationModel kPointMass0 = DiscreteInteger{{1.0}};

SimConfig canonical_config() {
  SimConfig c;
  c.big_a = 2.0;
  c.x0_log = 0.5;
  c.start_log = 1.2;
  c.master_seed = 42;
  return c;
}

}  // namespace

TEST_CASE("step_random_exchange") {
  CHECK(step_random_exchange(3.2, 1.0) == doctest::Approx(2.2).epsilon(1e-15));
  CHECK(step_random_exchange(0.2, 5.0) == 5.0);
  for (double x : {-3.0, 0.0, 7.5})
    CHECK(step_random_exchange(x, x + 1.0) == x + 1.0);
}

TEST_CASE("step_ar_log values and bounds") {
  CHECK(step_ar_log(5.0, 5.0, 2.0) ==
        doctest::Approx(5.5849625).epsilon(1e-7));
  CHECK(step_ar_log(1.0, 10.0, 2.0) ==
        doctest::Approx(10.0014082).epsilon(1e-7));
  CHECK(step_ar_log(100.0, 100.0 - 1.0 - 70.0, 2.0) == 99.0);  // gap < -60
  RngStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double l = 200.0 * (rng.next_uniform() - 0.5);
    const double eta = 200.0 * (rng.next_uniform() - 0.5);
    const double s = step_ar_log(l, eta, 2.0);
    const double m = std::max(l - 1.0, eta);
    CHECK(s >= m);
    CHECK(s <= m + 1.0 + 1e-12);  // log_2 2 = 1
  }
  CHECK(std::isfinite(step_ar_log(1e9, -1e9, 2.0)));
  CHECK(std::isfinite(step_ar_log(-1e9, 1e9, 2.0)));
}

TEST_CASE("simulate_recurrence_time deterministic cases") {
  auto config = canonical_config();
  RngStream rng(1);
  auto out = simulate_recurrence_time(ChainKind::RandomExchange, kPointMass0,
                                      config, rng);
  CHECK(out.hit);
  CHECK(out.steps == 1);

  config.start_log = 3.6;
  RngStream rng2(1);
  out = simulate_recurrence_time(ChainKind::RandomExchange, kPointMass0,
                                 config, rng2);
  CHECK(out.hit);
  CHECK(out.steps == 4);

  config.start_log = 1.2;
  config.horizon_cap = 1;
  const InnovationModel high = DiscreteInteger{{0, 0, 0, 0, 0, 1.0}};
  RngStream rng3(1);
  out = simulate_recurrence_time(ChainKind::RandomExchange, high, config, rng3);
  CHECK(!out.hit);
  CHECK(out.steps == 1);
}

TEST_CASE("estimate_tail matches exact values at small n") {
  auto config = canonical_config();
  config.replicates = 200'000;
  config.horizon_cap = 4;
  const auto est = estimate_tail(ChainKind::RandomExchange, kCanonical, config,
                                 {1, 2});
  CHECK(std::abs(est[0].p_hat - 0.5) < 3.0 * est[0].std_err);
  CHECK(std::abs(est[1].p_hat - 0.40) < 3.0 * est[1].std_err);
  for (const auto& te : est)
    CHECK(te.std_err ==
          doctest::Approx(std::sqrt(te.p_hat * (1.0 - te.p_hat) /
                                    te.replicates)));
}

TEST_CASE("estimate_tail monotone and thread-count invariant") {
  auto config = canonical_config();
  config.replicates = 50'000;
  config.horizon_cap = 16;
  config.threads = 1;
  const auto one = estimate_tail(ChainKind::RandomExchange, kCanonical, config,
                                 {1, 2, 5, 10, 16});
  config.threads = 7;
  const auto seven = estimate_tail(ChainKind::RandomExchange, kCanonical,
                                   config, {1, 2, 5, 10, 16});
  REQUIRE(one.size() == seven.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].p_hat == seven[i].p_hat);  // bitwise
    if (i > 0) CHECK(one[i].p_hat <= one[i - 1].p_hat);
  }
}

TEST_CASE("estimate_expected_T") {
  auto config = canonical_config();
  config.start_log = 3.6;
  config.replicates = 1000;
  auto est = estimate_expected_T(ChainKind::RandomExchange, kPointMass0,
                                 config);
  CHECK(est.mean == 4.0);
  CHECK(est.std_err == 0.0);

  config = canonical_config();
  config.replicates = 100'000;
  est = estimate_expected_T(ChainKind::RandomExchange, kCanonical, config);
  CHECK(std::abs(est.mean - 3.968254) < 3.0 * est.std_err);

  config.start_log = 2.2;
  est = estimate_expected_T(ChainKind::RandomExchange, kCanonical, config);
  CHECK(std::abs(est.mean - 5.952381) < 3.0 * est.std_err);

  config.start_log = 1.2;
  config.horizon_cap = 1;
  CHECK_THROWS(estimate_expected_T(ChainKind::RandomExchange, kCanonical,
                                   config));
}

TEST_CASE("MaxAr and RandomExchange share hitting times") {
  auto config = canonical_config();
  config.replicates = 2000;
  config.horizon_cap = 100;
  for (std::int64_t i = 0; i < 50; ++i) {
    RngStream r1(config.master_seed, static_cast<std::uint64_t>(i));
    RngStream r2(config.master_seed, static_cast<std::uint64_t>(i));
    const auto a = simulate_recurrence_time(ChainKind::MaxAr, kCanonical,
                                            config, r1);
    const auto b = simulate_recurrence_time(ChainKind::RandomExchange,
                                            kCanonical, config, r2);
    CHECK(a.hit == b.hit);
    CHECK(a.steps == b.steps);
  }
}

TEST_CASE("pathwise sandwich M <= X <= (k+1)M") {
  const InnovationModel model = LogTail{0.5};
  const double log_a = std::log(2.0);
  int violations = 0;
  for (int path = 0; path < 1000; ++path) {
    RngStream rng(99, static_cast<std::uint64_t>(path));
    double r = 1.2, x = 1.2;
    for (int k = 1; k <= 1000; ++k) {
      const double eta = sample(model, rng);
      r = step_random_exchange(r, eta);
      x = step_ar_log(x, eta, 2.0);
      if (!(r <= x + 1e-9) ||
          !(x <= r + std::log1p(static_cast<double>(k)) / log_a + 1e-9))
        ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("sample_scaled_marginal deterministic drift") {
  auto config = canonical_config();
  config.replicates = 10;
  config.start_log = 0.9 * 100.0;  // s*n with s = 0.9, n = 100
  config.x0_log = 0.5;
  config.horizon_cap = 200;
  const auto out = sample_scaled_marginal(ChainKind::RandomExchange,
                                          kPointMass0, config, 0.5, 100,
                                          false);
  REQUIRE(out.kept == 10);
  for (double v : out.values)
    CHECK(v == doctest::Approx(0.9 - 0.5).epsilon(1e-12));
}

TEST_CASE("sample_scaled_marginal conditioning bookkeeping") {
  auto config = canonical_config();
  config.replicates = 20'000;
  config.horizon_cap = 64;
  const auto out = sample_scaled_marginal(ChainKind::RandomExchange,
                                          kCanonical, config, 1.0, 32, true);
  CHECK(out.attempted == 20'000);
  CHECK(out.kept == static_cast<std::int64_t>(out.values.size()));
  CHECK(out.kept > 0);
  CHECK(out.kept < out.attempted);
}

TEST_CASE("estimate_V bounds") {
  const InnovationModel model = LogTail{0.5};
  // Kill level above the drift sign change of U0 + U_eps, so the stopped
  // process is a genuine supermartingale and both bounds are exact.
  const double x0 = 8.0, x = 50.0;
  const auto est = estimate_V(model, 2.0, x0, x, 200, 40'000, 7, 2);
  CHECK(est.mean >= u0_integral(model, x) - u0_integral(model, x0) -
                        3.0 * est.std_err);
  const double eps = 0.5;  // (1-c)/(2c)
  CHECK(est.mean <= u0_integral(model, x) + ueps_integral(model, x, eps) +
                        3.0 * est.std_err);
  CHECK_THROWS(estimate_V(model, 2.0, 0.5, 0.4, 10, 10, 1, 1));
}

TEST_CASE("config validation") {
  SimConfig bad = canonical_config();
  bad.start_log = 0.1;
  CHECK_THROWS(bad.validate());
  bad = canonical_config();
  bad.big_a = 1.0;
  CHECK_THROWS(bad.validate());
  bad = canonical_config();
  bad.horizon_cap = 0;
  CHECK_THROWS(bad.validate());
}
