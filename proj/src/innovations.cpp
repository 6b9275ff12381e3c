#include "hitting/innovations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hitting/quadrature.hpp"

namespace hitting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lognormal_cdf(const LogNormalTail& m, double y) {
  if (y <= 0.0) return 0.0;
  const double z = (std::log(y) - m.mu) / m.sigma;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

double tail(const InnovationModel& model, double y) {
  if (y < 0.0) return 1.0;
  return std::visit(
      [y](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogTail>) {
          return m.c / (m.c + y);
        } else if constexpr (std::is_same_v<T, ShiftedPareto>) {
          return std::pow(1.0 + y / m.scale, -m.alpha);
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return std::exp(-std::pow(y / m.scale, m.beta));
        } else if constexpr (std::is_same_v<T, LogNormalTail>) {
          if (y == 0.0) return 1.0;
          const double z = (std::log(y) - m.mu) / m.sigma;
          return 0.5 * std::erfc(z / std::sqrt(2.0));
        } else {
          double s = 0.0;
          for (std::size_t k = 0; k < m.probs.size(); ++k)
            if (static_cast<double>(k) > y) s += m.probs[k];
          return s;
        }
      },
      model);
}

double cdf(const InnovationModel& model, double y) {
  if (const auto* d = std::get_if<DiscreteInteger>(&model)) {
    if (y < 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < d->probs.size(); ++k)
      if (static_cast<double>(k) <= y) s += d->probs[k];
    return s;
  }
  return 1.0 - tail(model, y);
}

double quantile(const InnovationModel& model, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("quantile: u must lie in (0,1)");
  return std::visit(
      [u](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogTail>) {
          return m.c * u / (1.0 - u);
        } else if constexpr (std::is_same_v<T, ShiftedPareto>) {
          return m.scale * (std::pow(1.0 - u, -1.0 / m.alpha) - 1.0);
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return m.scale * std::pow(-std::log1p(-u), 1.0 / m.beta);
        } else if constexpr (std::is_same_v<T, LogNormalTail>) {
          // Bisection on the CDF, absolute tolerance 1e-12.
          double lo = 0.0, hi = std::exp(m.mu + m.sigma);
          while (lognormal_cdf(m, hi) < u) hi *= 2.0;
          while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (lognormal_cdf(m, mid) >= u)
              hi = mid;
            else
              lo = mid;
          }
          return hi;
        } else {
          double acc = 0.0;
          for (std::size_t k = 0; k < m.probs.size(); ++k) {
            acc += m.probs[k];
            if (acc >= u) return static_cast<double>(k);
          }
          return static_cast<double>(m.probs.size() - 1);
        }
      },
      model);
}

double sample(const InnovationModel& model, RngStream& rng) {
  return quantile(model, rng.next_uniform());
}

double mean_upper(const InnovationModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogTail>) {
          return kInf;
        } else if constexpr (std::is_same_v<T, ShiftedPareto>) {
          return m.scale / (m.alpha - 1.0);
        } else if constexpr (std::is_same_v<T, Weibull>) {
          return m.scale * std::tgamma(1.0 + 1.0 / m.beta);
        } else if constexpr (std::is_same_v<T, LogNormalTail>) {
          return std::exp(m.mu + 0.5 * m.sigma * m.sigma);
        } else {
          double s = 0.0;
          for (std::size_t k = 0; k < m.probs.size(); ++k)
            s += static_cast<double>(k) * m.probs[k];
          return s;
        }
      },
      model);
}

ChainClassification classify(const InnovationModel& model) {
  if (const auto* lt = std::get_if<LogTail>(&model)) {
    if (lt->c < 1.0) return ChainClassification::NullRecurrent;
    if (lt->c > 1.0) return ChainClassification::Transient;
    return ChainClassification::CriticalUnresolved;
  }
  return ChainClassification::PositiveRecurrent;
}

double sstar_ratio(const InnovationModel& model, double x) {
  if (x == 0.0) return 0.0;
  if (std::isinf(mean_upper(model)))
    throw std::invalid_argument("sstar_ratio requires a finite-mean model");
  const double fx = tail(model, x);
  if (!(fx > 0.0))
    throw std::invalid_argument("sstar_ratio: tail vanishes at x");
  const double conv = integrate(
      [&](double y) { return tail(model, x - y) * tail(model, y); }, 0.0, x,
      1e-8);
  return conv / fx;
}

namespace {

// log F-bar, evaluated without underflow for the closed-form families.
double log_tail(const InnovationModel& model, double y) {
  if (y < 0.0) return 0.0;
  if (const auto* lt = std::get_if<LogTail>(&model))
    return std::log(lt->c) - std::log(lt->c + y);
  if (const auto* sp = std::get_if<ShiftedPareto>(&model))
    return -sp->alpha * std::log1p(y / sp->scale);
  if (const auto* w = std::get_if<Weibull>(&model))
    return -std::pow(y / w->scale, w->beta);
  return std::log(tail(model, y));
}

}  // namespace

double log_insens_ratio(const InnovationModel& model, double x) {
  if (!(x > 1.0)) {
    if (x == 1.0) return 1.0;
    throw std::invalid_argument("log_insens_ratio requires x >= 1");
  }
  return std::exp(log_tail(model, x - std::log(x)) - log_tail(model, x));
}

double log_tail_d(const LogTail& model, double big_a) {
  return model.c * std::log(big_a);
}

DiscreteInteger load_discrete_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::vector<double> probs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    probs.push_back(std::stod(line));
  }
  if (probs.empty()) throw std::runtime_error("empty model file: " + path);
  for (double p : probs)
    if (p < 0.0) throw std::runtime_error("negative probability in " + path);
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::runtime_error("probabilities in " + path +
                             " do not sum to 1 within 1e-12");
  for (double& p : probs) p /= sum;
  return DiscreteInteger{std::move(probs)};
}

namespace {

std::unordered_map<std::string, std::string> parse_kv(const std::string& body) {
  std::unordered_map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad model parameter: " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double need(const std::unordered_map<std::string, std::string>& kv,
            const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("missing model parameter: " + key);
  return std::stod(it->second);
}

}  // namespace

InnovationModel parse_model_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("model spec needs the form family:k=v,...");
  const std::string family = spec.substr(0, colon);
  const auto kv = parse_kv(spec.substr(colon + 1));
  if (family == "log-tail") {
    const double c = need(kv, "c");
    if (!(c > 0.0)) throw std::invalid_argument("log-tail requires c > 0");
    return LogTail{c};
  }
  if (family == "pareto") {
    const double alpha = need(kv, "alpha");
    const double scale = need(kv, "scale");
    if (!(alpha > 1.0 && scale > 0.0))
      throw std::invalid_argument("pareto requires alpha > 1, scale > 0");
    return ShiftedPareto{alpha, scale};
  }
  if (family == "weibull") {
    const double beta = need(kv, "beta");
    const double scale = need(kv, "scale");
    if (!(beta > 0.0 && beta < 1.0 && scale > 0.0))
      throw std::invalid_argument(
          "weibull requires beta in (0,1), scale > 0");
    return Weibull{beta, scale};
  }
  if (family == "lognormal") {
    const double mu = need(kv, "mu");
    const double sigma = need(kv, "sigma");
    if (!(sigma > 0.0)) throw std::invalid_argument("lognormal needs sigma>0");
    return LogNormalTail{mu, sigma};
  }
  if (family == "discrete") {
    const auto it = kv.find("file");
    if (it == kv.end())
      throw std::invalid_argument("discrete model needs file=PATH");
    return load_discrete_model(it->second);
  }
  throw std::invalid_argument("unknown model family: " + family);
}

std::string classification_name(ChainClassification c) {
  switch (c) {
    case ChainClassification::PositiveRecurrent:
      return "positive-recurrent";
    case ChainClassification::NullRecurrent:
      return "null-recurrent";
    case ChainClassification::Transient:
      return "transient";
    case ChainClassification::CriticalUnresolved:
      return "critical-unresolved";
  }
  return "unknown";
}

}  // namespace hitting
