#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hitting/harness.hpp"
#include "hitting/innovations.hpp"
#include "hitting/rng.hpp"

using namespace hitting;

namespace {

const std::vector<InnovationModel> kFamilies = {
    LogTail{0.5}, ShiftedPareto{2.0, 1.0}, Weibull{0.5, 1.0},
    LogNormalTail{0.0, 1.0}, DiscreteInteger{{0.5, 0.2, 0.1, 0.1, 0.1}}};

}  // namespace

TEST_CASE("tail closed forms") {
  CHECK(tail(LogTail{0.5}, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tail(DiscreteInteger{{0.5, 0.2, 0.1, 0.1, 0.1}}, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (const auto& m : kFamilies) CHECK(tail(m, -1.0) == 1.0);
}

TEST_CASE("tail is a survival function") {
  for (const auto& m : kFamilies) {
    double prev = 1.0;
    for (double y : {0.0, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e8}) {
      const double t = tail(m, y);
      CHECK(t >= 0.0);
      CHECK(t <= prev + 1e-14);
      prev = t;
    }
    CHECK(tail(m, 1e12) < 1e-3);
  }
}

TEST_CASE("tail + cdf = 1") {
  for (const auto& m : kFamilies)
    for (double y : {0.3, 0.7, 1.9, 5.5, 42.0})
      CHECK(tail(m, y) + cdf(m, y) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("LogTail y*tail(y) -> c") {
  const InnovationModel m = LogTail{0.5};
  CHECK(1e8 * tail(m, 1e8) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("quantile closed forms") {
  CHECK(quantile(LogTail{0.5}, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(quantile(ShiftedPareto{2.0, 1.0}, 0.75) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quantile(DiscreteInteger{{0, 0, 0, 1.0}}, 0.2) == 3.0);
  CHECK_THROWS(quantile(LogTail{0.5}, 0.0));
  CHECK_THROWS(quantile(LogTail{0.5}, 1.0));
}

TEST_CASE("quantile/cdf galois inequalities") {
  RngStream rng(7);
  for (const auto& m : kFamilies)
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.next_uniform();
      const double q = quantile(m, u);
      CHECK(cdf(m, q + 1e-9) >= u - 1e-9);
    }
}

TEST_CASE("sample marginals pass KS at 99%") {
  const int n = 100'000;
  const double crit = 1.63 / std::sqrt(static_cast<double>(n));
  for (const auto& m : kFamilies) {
    if (std::get_if<DiscreteInteger>(&m)) continue;  // atoms: KS not valid
    RngStream rng(11);
    std::vector<double> draws(n);
    for (auto& d : draws) d = sample(m, rng);
    EmpiricalCdf ecdf(std::move(draws));
    CHECK(ks_distance(ecdf, [&](double y) { return cdf(m, y); }) < crit);
  }
}

TEST_CASE("point mass sampling") {
  const InnovationModel m = DiscreteInteger{{0, 0, 0, 1.0}};
  RngStream rng(3);
  for (int i = 0; i < 10; ++i) CHECK(sample(m, rng) == 3.0);
}

TEST_CASE("mean_upper") {
  CHECK(std::isinf(mean_upper(LogTail{0.5})));
  CHECK(mean_upper(ShiftedPareto{2.0, 1.0}) == doctest::Approx(1.0));
  CHECK(mean_upper(Weibull{0.5, 1.0}) == doctest::Approx(2.0));
}

TEST_CASE("classify") {
  CHECK(classify(LogTail{0.5}) == ChainClassification::NullRecurrent);
  CHECK(classify(LogTail{0.9999}) == ChainClassification::NullRecurrent);
  CHECK(classify(LogTail{1.0}) == ChainClassification::CriticalUnresolved);
  CHECK(classify(LogTail{1.0001}) == ChainClassification::Transient);
  CHECK(classify(LogTail{1.5}) == ChainClassification::Transient);
  CHECK(classify(ShiftedPareto{2.0, 1.0}) ==
        ChainClassification::PositiveRecurrent);
  CHECK(classify(Weibull{0.5, 1.0}) ==
        ChainClassification::PositiveRecurrent);
  CHECK(classification_name(classify(LogTail{0.5})) == "null-recurrent");
}

TEST_CASE("sstar_ratio") {
  CHECK(sstar_ratio(ShiftedPareto{2.0, 1.0}, 0.0) == 0.0);
  CHECK(sstar_ratio(ShiftedPareto{2.0, 1.0}, 1e3) ==
        doctest::Approx(2.0).epsilon(0.05));
  const InnovationModel w = Weibull{0.5, 1.0};
  CHECK(std::abs(sstar_ratio(w, 400.0) - 4.0) <
        std::abs(sstar_ratio(w, 100.0) - 4.0));
  CHECK_THROWS(sstar_ratio(LogTail{0.5}, 10.0));
}

TEST_CASE("log_insens_ratio") {
  CHECK(log_insens_ratio(LogTail{0.5}, 1.0) == 1.0);
  CHECK(log_insens_ratio(ShiftedPareto{2.0, 1.0}, 100.0) ==
        doctest::Approx(1.0978).epsilon(1e-4));
  const InnovationModel w = Weibull{0.5, 1.0};
  CHECK(std::abs(log_insens_ratio(w, 1e6) - 1.0) <
        std::abs(log_insens_ratio(w, 1e3) - 1.0));
}

TEST_CASE("log_tail_d relation") {
  CHECK(log_tail_d(LogTail{0.5}, 2.0) ==
        doctest::Approx(0.5 * std::log(2.0)));
}

TEST_CASE("parse_model_spec round trips") {
  CHECK(std::get<LogTail>(parse_model_spec("log-tail:c=0.5")).c == 0.5);
  const auto p = std::get<ShiftedPareto>(parse_model_spec("pareto:alpha=2,scale=1"));
  CHECK(p.alpha == 2.0);
  CHECK(p.scale == 1.0);
  const auto w = std::get<Weibull>(parse_model_spec("weibull:beta=0.5,scale=1"));
  CHECK(w.beta == 0.5);
  CHECK(std::get<LogNormalTail>(parse_model_spec("lognormal:mu=0,sigma=1"))
            .sigma == 1.0);
  CHECK_THROWS(parse_model_spec("gaussian:mu=0"));
  CHECK_THROWS(parse_model_spec("log-tail"));
  CHECK_THROWS(parse_model_spec("log-tail:c=-1"));
}

TEST_CASE("load_discrete_model validates") {
  const std::string good = "/tmp/model_good.txt";
  {
    std::FILE* f = std::fopen(good.c_str(), "w");
    std::fputs("0.5\n0.2\n0.1\n0.1\n0.1\n", f);
    std::fclose(f);
  }
  const auto m = load_discrete_model(good);
  REQUIRE(m.probs.size() == 5);
  CHECK(m.probs[0] == doctest::Approx(0.5));

  const std::string bad = "/tmp/model_bad.txt";
  {
    std::FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("0.5\n0.4\n", f);
    std::fclose(f);
  }
  CHECK_THROWS(load_discrete_model(bad));
  CHECK_THROWS(load_discrete_model("/tmp/does_not_exist_model.txt"));
}
