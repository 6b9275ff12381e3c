#include "hitting/zlimit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hitting/quadrature.hpp"

namespace hitting {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a,b), modified Lentz.
double betacf(double a, double b, double x, const SpecialFnAccuracy& acc) {
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= acc.max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < acc.abs_tol * 0.1) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction diverged");
}

}  // namespace

void ZParams::validate() const {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("ZParams: c must lie in (0,1)");
}

double reg_inc_beta(double x, double a, double b,
                    const SpecialFnAccuracy& acc) {
  if (!(x >= 0.0 && x <= 1.0 && a > 0.0 && b > 0.0))
    throw std::invalid_argument("reg_inc_beta: bad arguments");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x, acc) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x, acc) / b;
}

double z_transition_cdf(const ZParams& params, double x, double t, double y) {
  params.validate();
  if (!(x >= 0.0 && t > 0.0))
    throw std::invalid_argument("z_transition_cdf: need x >= 0, t > 0");
  const double atom = std::max(x - t, 0.0);
  if (y < atom) return 0.0;
  return std::pow(y / (y + t), params.c);
}

double z_step_sample(const ZParams& params, double x, double t, double u) {
  params.validate();
  if (!(t > 0.0)) throw std::invalid_argument("z_step_sample: t must be > 0");
  if (t < x) {
    const double atom_mass = std::pow((x - t) / x, params.c);
    if (u <= atom_mass) return x - t;
  }
  const double s = std::pow(u, 1.0 / params.c);  // s = y/(y+t)
  return t * s / (1.0 - s);
}

double t0_tail(const ZParams& params, double z, double t,
               const SpecialFnAccuracy& acc) {
  params.validate();
  if (!(z > 0.0 && t > 0.0))
    throw std::invalid_argument("t0_tail: need z, t > 0");
  if (t <= z) return 1.0;
  return reg_inc_beta(z / t, 1.0 - params.c, params.c, acc);
}

double sample_t0(const ZParams& params, double z, RngStream& rng,
                 const SpecialFnAccuracy& acc) {
  params.validate();
  if (!(z > 0.0)) throw std::invalid_argument("sample_t0: z must be > 0");
  const double u = rng.next_uniform();
  // Invert I_b(1-c, c) = u by bisection on [0,1].
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(mid, 1.0 - params.c, params.c, acc) < u)
      lo = mid;
    else
      hi = mid;
  }
  const double b = 0.5 * (lo + hi);
  if (!(b > 0.0)) throw std::runtime_error("sample_t0: inversion failure");
  return z / b;
}

double sample_exp_functional(const ZParams& params, RngStream& rng,
                             double trunc_tol) {
  params.validate();
  if (!(trunc_tol > 0.0))
    throw std::invalid_argument("sample_exp_functional: trunc_tol must be > 0");
  double level = 0.0;  // zeta_t - t at the current time
  double acc = 0.0;
  for (;;) {
    // Segment to the next jump: exponent drifts down with slope -1.
    const double wait = -std::log(rng.next_uniform()) / params.c;
    acc += std::exp(level) * (-std::expm1(-wait));
    level -= wait;
    if (std::exp(level) < trunc_tol * acc) break;
    level += -std::log(rng.next_uniform());  // Exp(1) jump
  }
  return acc;
}

double harmonic_identity_residual(const ZParams& params, double x, double t,
                                  const SpecialFnAccuracy& acc) {
  params.validate();
  if (!(x > 0.0 && t > 0.0))
    throw std::invalid_argument("harmonic_identity_residual: need x, t > 0");
  const double c = params.c;
  const double target = std::pow(std::max(t, x), 1.0 - c) -
                        std::pow(x, 1.0 - c);
  if (t <= x) return std::abs(target);

  // int_x^t (t-s)^(1-c) f(s) ds with the hitting-time density
  // f(s) = x^(1-c) (s-x)^(c-1) / (B(c,1-c) s). Substituting s = x + w^(1/c)
  // gives f(s) ds = x^(1-c) / (B c s) dw: the endpoint singularity cancels.
  const double inv_beta = std::exp(-log_beta(c, 1.0 - c));
  auto transformed = [&](double w) {
    const double s = x + std::pow(w, 1.0 / c);
    return std::pow(t - s, 1.0 - c) * std::pow(x, 1.0 - c) / (s * c);
  };
  const double w_hi = std::pow(t - x, c);
  const double integral =
      inv_beta * integrate(transformed, 0.0, w_hi, 1e-10, acc.abs_tol);
  return std::abs(std::pow(t, 1.0 - c) - std::pow(x, 1.0 - c) - integral);
}

double cond_limit_marginal_cdf(double t, double y) {
  if (!(t > 0.0 && y >= 0.0))
    throw std::invalid_argument("cond_limit_marginal_cdf: need t > 0, y >= 0");
  return y / (y + t);
}

double hat_marginal_cdf(const ZParams& params, double y,
                        const SpecialFnAccuracy& acc) {
  params.validate();
  if (!(y >= 0.0))
    throw std::invalid_argument("hat_marginal_cdf: y must be >= 0");
  if (y == 0.0) return 0.0;
  const double c = params.c;
  const double norm =
      std::sin(std::numbers::pi * c) / ((1.0 - c) * std::numbers::pi);
  auto density = [&](double z) {
    return std::pow(z, 1.0 - c) / ((1.0 + z) * (1.0 + z));
  };
  const double integral = integrate(density, 0.0, y, 1e-10, acc.abs_tol);
  return std::min(1.0, norm * integral);
}

}  // namespace hitting
