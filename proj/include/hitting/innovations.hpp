#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hitting/rng.hpp"

namespace hitting {

// Innovation families for eta (equivalently xi = A^eta). All supported on
// [0, inf); tails are exact closed forms.

// Survival c/(c+y); infinite mean, P(eta > y) ~ c/y.
struct LogTail {
  double c;
};

// Survival (1+y/scale)^(-alpha), alpha > 1 so the mean is finite.
struct ShiftedPareto {
  double alpha;
  double scale;
};

// Survival exp(-(y/scale)^beta), beta in (0,1).
struct Weibull {
  double beta;
  double scale;
};

struct LogNormalTail {
  double mu;
  double sigma;
};

// Finite pmf on {0,...,K}; exists to enable exact brute-force oracles.
struct DiscreteInteger {
  std::vector<double> probs;
};

using InnovationModel =
    std::variant<LogTail, ShiftedPareto, Weibull, LogNormalTail,
                 DiscreteInteger>;

enum class ChainClassification {
  PositiveRecurrent,
  NullRecurrent,
  Transient,
  CriticalUnresolved,
};

// P(eta > y). Exact closed form per family; 1 for y < 0.
double tail(const InnovationModel& model, double y);

// P(eta <= y), right-continuous.
double cdf(const InnovationModel& model, double y);

// Generalized inverse of the CDF; throws std::invalid_argument unless
// u in (0,1).
double quantile(const InnovationModel& model, double u);

// Inverse-transform draw consuming one uniform from the stream.
double sample(const InnovationModel& model, RngStream& rng);

// E[eta^+]; +infinity for LogTail.
double mean_upper(const InnovationModel& model);

ChainClassification classify(const InnovationModel& model);

// S* diagnostic: int_0^x tail(x-y) tail(y) dy / tail(x). Tends to
// 2 * mean_upper for strong subexponential families. Throws on infinite mean.
double sstar_ratio(const InnovationModel& model, double x);

// tail(x - log x) / tail(x) for x > 1; tends to 1 under log-insensitivity.
double log_insens_ratio(const InnovationModel& model, double x);

// Relation d = c * log A between the xi- and eta-tail constants.
double log_tail_d(const LogTail& model, double big_a);

// Parse a model spec string such as "log-tail:c=0.5", "pareto:alpha=2,scale=1",
// "weibull:beta=0.5,scale=1", "lognormal:mu=0,sigma=1", "discrete:file=PATH".
InnovationModel parse_model_spec(const std::string& spec);

// One probability per line, index = support point. The sum must be within
// 1e-12 of 1; the vector is then renormalized exactly.
DiscreteInteger load_discrete_model(const std::string& path);

std::string classification_name(ChainClassification c);

}  // namespace hitting
