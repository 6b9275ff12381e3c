#include "hitting/exact_r.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hitting/quadrature.hpp"

namespace hitting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cell index n with x in (x0+n, x0+n+1], for x > x0.
int cell_index(double x0, double x) {
  const double s = x - x0;
  int n = static_cast<int>(std::ceil(s)) - 1;
  if (n < 0) n = 0;
  while (x0 + n >= x) --n;
  while (x0 + n + 1 < x) ++n;
  return n;
}

// log prod_{k=0}^{inf} P(eta <= x0+k); -inf when eta has infinite mean.
double log_prod_inf(const InnovationModel& model, double x0) {
  if (std::isinf(mean_upper(model))) return -kInf;
  double acc = 0.0;
  int k = 0;
  double q = tail(model, x0 + k);
  while (q > 1e-13 && k < 2'000'000) {
    acc += std::log1p(-q);
    ++k;
    q = tail(model, x0 + k);
  }
  if (q > 0.0) {
    // Midpoint estimate of the remaining sum of -log p ~ q terms.
    acc -= integrate_to_inf(
        [&](double t) { return tail(model, x0 + t); }, k - 0.5, 1e-10);
  }
  return acc;
}

}  // namespace

CdfGrid cdf_grid(const InnovationModel& model, double x0, int kmax) {
  if (kmax < 0) throw std::invalid_argument("cdf_grid: kmax must be >= 0");
  CdfGrid grid;
  grid.x0 = x0;
  grid.p.resize(static_cast<std::size_t>(kmax) + 1);
  grid.q.resize(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    grid.q[k] = tail(model, x0 + k);
    grid.p[k] = 1.0 - grid.q[k];
  }
  if (!(grid.p[0] > 0.0) || !(grid.p[0] < 1.0))
    throw std::invalid_argument(
        "cdf_grid: need P(eta<=x0) P(eta>x0) > 0 at this x0");
  return grid;
}

double harmonic_G(const CdfGrid& grid, double x) {
  if (!(x > grid.x0))
    throw std::invalid_argument("harmonic_G: x must exceed x0");
  const int n = cell_index(grid.x0, x);
  if (n - 1 > grid.kmax())
    throw std::invalid_argument("harmonic_G: grid too short for x");
  double g = 1.0, prod = 1.0;
  for (int j = 1; j <= n; ++j) {
    prod *= grid.p[j - 1];
    g += prod;
  }
  return g;
}

HarmonicTable harmonic_table(const CdfGrid& grid, int nmax) {
  if (nmax < 0 || nmax - 1 > grid.kmax())
    throw std::invalid_argument("harmonic_table: grid too short");
  HarmonicTable table;
  table.grid = grid;
  table.G.resize(static_cast<std::size_t>(nmax) + 1);
  double g = 1.0, prod = 1.0;
  table.G[0] = 1.0;
  for (int n = 1; n <= nmax; ++n) {
    prod *= grid.p[n - 1];
    g += prod;
    table.G[n] = g;
  }
  return table;
}

double check_harmonicity(const InnovationModel& model, double x0, double x,
                         double /*rel_tol*/) {
  if (!(x > x0))
    throw std::invalid_argument("check_harmonicity: x must exceed x0");
  if (!(cdf(model, x0) > 0.0 && tail(model, x0) > 0.0))
    throw std::invalid_argument("check_harmonicity: degenerate x0");

  // Cell values g(m) = G on (x0+m, x0+m+1] and prefix products.
  const int m_cap = 4000;
  std::vector<double> prefix(m_cap + 3), g(m_cap + 3);
  prefix[0] = 1.0;
  g[0] = 1.0;
  double acc = 1.0;
  for (int m = 1; m <= m_cap + 2; ++m) {
    prefix[m] = prefix[m - 1] * cdf(model, x0 + m - 1);
    acc += prefix[m];
    g[m] = acc;
  }

  const double b = std::max(x - 1.0, x0);

  // E[G(eta); eta > b]: per-cell mass G * dF summed directly, then the
  // telescoped tail prod_{M+2} - prod_inf after Abel summation.
  const int m_start = (b > x0) ? cell_index(x0, b) : 0;
  double expect = 0.0;
  for (int m = m_start; m <= m_cap; ++m) {
    const double lo = std::max(b, x0 + m);
    const double mass = cdf(model, x0 + m + 1) - cdf(model, lo);
    expect += g[m] * mass;
  }
  const double prod_inf = std::exp(log_prod_inf(model, x0));
  expect += g[m_cap + 1] * tail(model, x0 + m_cap + 1);
  expect += prefix[m_cap + 2] - prod_inf;

  if (x <= x0 + 1.0) return 1.0 - expect;

  const int n = cell_index(x0, x);
  double gx = 1.0, gxm1 = 1.0, prod = 1.0;
  for (int j = 1; j <= n; ++j) {
    prod *= cdf(model, x0 + j - 1);
    gx += prod;
    if (j <= n - 1) gxm1 = gx;
  }
  if (n == 1) gxm1 = 1.0;
  return gx - gxm1 * cdf(model, x - 1.0) - expect;
}

double transient_return_prob(const CdfGrid& grid, double x) {
  if (!(x > grid.x0))
    throw std::invalid_argument("transient_return_prob: x must exceed x0");
  const int kmax = grid.kmax();
  double numer = 1.0, denom = 1.0, prod = 1.0;
  std::vector<double> terms;
  terms.reserve(kmax + 1);
  for (int j = 1; j <= kmax + 1; ++j) {
    prod *= grid.p[j - 1];
    terms.push_back(prod);
    denom += prod;
    if (static_cast<double>(j) < x - grid.x0) numer += prod;
  }
  // Power-law tail estimate from the last octave of terms; the series must
  // be decaying faster than 1/j or it is declared divergent.
  const int J = static_cast<int>(terms.size());
  if (J < 16)
    throw std::invalid_argument("transient_return_prob: grid too short");
  const double t_half = terms[J / 2 - 1], t_last = terms[J - 1];
  const double index =
      std::log(t_last / t_half) / std::log(static_cast<double>(J) / (J / 2));
  if (!(index < -1.0))
    throw std::domain_error(
        "transient_return_prob: series diverges (recurrent model)");
  const double tail_sum = t_last * J / (-index - 1.0);
  denom += tail_sum;
  if (x - grid.x0 > J) numer += tail_sum;
  return numer / denom;
}

double expected_T_exact(const CdfGrid& grid, double x) {
  if (!(x > grid.x0))
    throw std::invalid_argument("expected_T_exact: x must exceed x0");
  // log of the infinite product, with a power-law remainder estimate past
  // the end of the grid.
  double log_prod = 0.0;
  const int kmax = grid.kmax();
  int k = 0;
  for (; k <= kmax; ++k) {
    if (grid.p[k] <= 0.0) return kInf;
    log_prod += std::log1p(-grid.q[k]);
  }
  const double q_last = grid.q[kmax];
  if (q_last > 1e-15) {
    const double q_half = grid.q[kmax / 2];
    const double index = std::log(q_last / q_half) /
                         std::log(static_cast<double>(kmax) / (kmax / 2));
    if (!(index < -1.0)) return kInf;  // non-summable tail: infinite mean
    log_prod -= q_last * kmax / (-index - 1.0);
  }
  const double u1 = std::exp(-log_prod);
  if (std::isinf(u1)) return kInf;

  const int n = cell_index(grid.x0, x);
  if (n - 1 > kmax)
    throw std::invalid_argument("expected_T_exact: grid too short for x");
  double s = 1.0, prod = 1.0;
  for (int j = 1; j <= n; ++j) {
    prod *= grid.p[j - 1];
    s += prod;
  }
  return u1 * s;
}

TailTable tail_table(const CdfGrid& grid, int nmax) {
  if (nmax < 1) throw std::invalid_argument("tail_table: nmax must be >= 1");
  if (grid.kmax() < nmax)
    throw std::invalid_argument("tail_table: grid too short (kmax < nmax)");
  TailTable table;
  table.grid = grid;
  auto& v = table.v;
  auto& prefix = table.prefix;
  v.resize(nmax + 1);
  prefix.resize(nmax + 1);
  table.c_seq.resize(nmax + 1);
  table.d.resize(nmax);

  prefix[0] = 1.0;
  for (int m = 1; m <= nmax; ++m) prefix[m] = prefix[m - 1] * grid.p[m - 1];
  for (int m = 0; m + 1 <= nmax; ++m)
    table.d[m] = prefix[m] - prefix[m + 1];
  table.c_seq[0] = 1.0;
  for (int n = 1; n <= nmax; ++n) table.c_seq[n] = grid.q[n - 1];

  // Differences p[n-1] - p[m] are taken as q[m] - q[n-1]: both CDF values
  // round to 1.0 long before the tails underflow, and the recursion lives
  // entirely on those differences.
  v[0] = 1.0;
  if (nmax >= 1) v[1] = grid.q[0];
  for (int n = 2; n <= nmax; ++n) {
    double acc = grid.q[n - 1] + v[n - 1] * (grid.q[0] - grid.q[n - 1]);
    for (int m = 1; m <= n - 2; ++m)
      acc += v[n - m - 1] * (grid.q[m] - grid.q[n - 1]) * prefix[m];
    v[n] = acc;
  }
  return table;
}

double tail_at(const TailTable& table, int n, int k) {
  if (n < 0 || k < 0) throw std::out_of_range("tail_at: negative index");
  if (n <= k) return 1.0;
  if (n >= static_cast<int>(table.v.size()))
    throw std::out_of_range("tail_at: n exceeds nmax");
  double acc = table.v[n];
  for (int m = 1; m <= k; ++m) acc += table.v[n - m] * table.prefix[m];
  return acc;
}

namespace {

double u0_of(const InnovationModel& model, double y) {
  if (y <= 0.0) return 0.0;
  if (const auto* lt = std::get_if<LogTail>(&model))
    return lt->c * std::log1p(y / lt->c);
  if (const auto* sp = std::get_if<ShiftedPareto>(&model))
    return sp->scale / (sp->alpha - 1.0) *
           (1.0 - std::pow(1.0 + y / sp->scale, 1.0 - sp->alpha));
  return integrate([&](double t) { return tail(model, t); }, 0.0, y, 1e-10);
}

}  // namespace

double ueps_integral(const InnovationModel& model, double x, double eps) {
  if (x <= 0.0) return 0.0;
  if (eps < 0.0) throw std::invalid_argument("ueps_integral: eps must be >= 0");
  if (const auto* lt = std::get_if<LogTail>(&model)) {
    const double q = (1.0 + eps) * lt->c;
    if (q >= 1.0)
      throw std::invalid_argument(
          "ueps_integral: eps out of range for LogTail ((1+eps)c >= 1)");
    const double c = lt->c;
    return std::pow(c, q) *
           (std::pow(c + x, 1.0 - q) - std::pow(c, 1.0 - q)) / (1.0 - q);
  }
  return integrate(
      [&](double y) { return std::exp(-(1.0 + eps) * u0_of(model, y)); }, 0.0,
      x, 1e-9);
}

double u0_integral(const InnovationModel& model, double x) {
  return ueps_integral(model, x, 0.0);
}

double kappa(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("kappa: c must lie in (0,1)");
  return std::sin(std::numbers::pi * c) / ((1.0 - c) * std::numbers::pi);
}

double drift_residual(const LogTail& model, double big_a, double z,
                      double eps) {
  if (!(big_a > 1.0)) throw std::invalid_argument("drift_residual: A must be >1");
  const double c = model.c;
  if (!(eps >= 0.0 && (1.0 + eps) * c < 1.0))
    throw std::invalid_argument("drift_residual: eps out of [0,(1-c)/c)");
  const InnovationModel m = model;
  const double log_a = std::log(big_a);
  auto step = [&](double eta) {
    const double hi = std::max(z - 1.0, eta);
    const double gap = std::abs(z - 1.0 - eta);
    return hi + std::log1p(std::exp(-gap * log_a)) / log_a;
  };
  auto payoff = [&](double eta) {
    const double s = step(eta);
    return u0_integral(m, s) + ueps_integral(m, s, eps);
  };
  // E over eta = quantile(u) with the endpoint substitution u = 1 - w^(1/c):
  // the integrand is bounded on (0,1] in the w variable.
  const double inv_c = 1.0 / c;
  auto integrand = [&](double w) {
    const double omu = std::pow(w, inv_c);  // 1 - u
    const double eta = c * (1.0 - omu) / omu;
    return payoff(eta) * inv_c * std::pow(w, inv_c - 1.0);
  };
  const double expect = integrate(integrand, 0.0, 1.0, 1e-9);
  return expect - u0_integral(m, z) - ueps_integral(m, z, eps);
}

double cj_constant() { return 3.0 / (std::numbers::pi * std::numbers::pi); }

double cj(const InnovationModel& model, double big_a, double y, int j) {
  if (!(big_a > 1.0 && y > 0.0 && j >= 0))
    throw std::invalid_argument("cj: need A>1, y>0, j>=0");
  const double log_a = std::log(big_a);
  const double threshold_log =
      j + (std::log(cj_constant() * y) - 2.0 * std::log1p(j)) / log_a;
  return tail(model, threshold_log);
}

double c_big(const InnovationModel& model, double big_a, double y, int jmax,
             double tol) {
  double sum = 0.0, prev = kInf;
  for (int j = 0; j <= jmax; ++j) {
    const double term = cj(model, big_a, y, j);
    sum += term;
    if (term < tol && term < prev) {
      const double ratio = (prev > 0.0) ? term / prev : 0.0;
      if (ratio < 1.0) return sum + term * ratio / (1.0 - ratio);
    }
    prev = term;
  }
  throw std::domain_error("c_big: series did not converge within jmax terms");
}

void write_tail_csv(const TailTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "n,v_n\n";
  out.precision(17);
  for (std::size_t n = 0; n < table.v.size(); ++n)
    out << n << ',' << table.v[n] << '\n';
}

void write_harmonic_csv(const HarmonicTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "n,G_n\n";
  out.precision(17);
  for (std::size_t n = 0; n < table.G.size(); ++n)
    out << n << ',' << table.G[n] << '\n';
}

}  // namespace hitting
