#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hitting/innovations.hpp"

namespace hitting {

enum class ExperimentName {
  VerifyThm2,
  VerifyThm4,
  VerifyThm5,
  VerifyZLaw,
  VerifyFuncLimit,
  VerifySandwich,
  OracleSuite,
};

struct ExperimentSpec {
  ExperimentName name = ExperimentName::OracleSuite;
  std::string model_spec;  // empty = experiment default
  double x0 = 0.5;
  double big_a = 2.0;
  double start_log = 1.2;
  std::vector<std::int64_t> n_grid;
  std::int64_t replicates = 100'000;
  std::uint64_t seed = 1;
  double tol = 0.25;
  int threads = 1;
};

struct MetricRow {
  std::string label;
  double n = 0.0;
  double observed = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  double std_err = 0.0;
  bool pass = false;
};

struct ResultRecord {
  std::string experiment;
  ExperimentSpec spec;  // parameter echo: rerunnable to identical numbers
  std::vector<MetricRow> rows;
  bool pass = false;
};

// Right-continuous empirical CDF of a sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> sample);

  double operator()(double x) const;
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Exact P_start(T > n) for the random exchange chain with DiscreteInteger
// innovations, by dynamic programming over the finite reachable state set.
// Independent of the recursion path it cross-checks. n <= 20.
double brute_force_tail(const DiscreteInteger& model, double x0, double start,
                        int n);

// Sup-norm distance between an ECDF and a reference CDF (both one-sided
// gaps at every sample point).
double ks_distance(const EmpiricalCdf& ecdf,
                   const std::function<double(double)>& reference_cdf);

// Acceptance policy for rate-free limits: |ratio - 1| non-increasing along
// the grid up to a 10% slack factor, final |ratio - 1| <= tol. The optional
// slacks vector widens each comparison (MC error bars).
bool ratio_trend(const std::vector<std::pair<double, double>>& pairs,
                 double tol, const std::vector<double>& slacks = {});

std::string experiment_name(ExperimentName name);
ExperimentName parse_experiment_name(const std::string& s);

// Fills in the canonical parameters for the named experiment; fields the
// caller already set are preserved by run_experiment.
ExperimentSpec default_spec(ExperimentName name);

ResultRecord run_experiment(const ExperimentSpec& spec);

// CSV columns experiment,n,observed,reference,ratio,std_err,pass;
// JSON mirrors ResultRecord. Both byte-deterministic given the record.
void write_csv(const ResultRecord& record, const std::string& path);
std::string to_csv(const ResultRecord& record);
void write_json(const ResultRecord& record, const std::string& path);
std::string to_json(const ResultRecord& record);

// The canonical oracle model {0.5, 0.2, 0.1, 0.1, 0.1}.
DiscreteInteger canonical_discrete_model();

}  // namespace hitting
