#pragma once

#include "hitting/rng.hpp"

namespace hitting {

// Analytic laws and exact samplers for the self-similar limit process Z with
// kernel P_x((x-t)^+ <= Z_t <= y) = (y/(y+t))^c.
struct ZParams {
  double c;  // index in (0,1)

  void validate() const;
};

struct SpecialFnAccuracy {
  double abs_tol = 1e-12;
  int max_iter = 300;
};

// Regularized incomplete beta I_x(a,b), continued fraction with the usual
// symmetry switch; absolute error bounded by acc.abs_tol.
double reg_inc_beta(double x, double a, double b,
                    const SpecialFnAccuracy& acc = {});

// P_x((x-t)^+ <= Z_t <= y): 0 below the atom, (y/(y+t))^c above.
double z_transition_cdf(const ZParams& params, double x, double t, double y);

// Exact inverse-CDF draw of the one-step kernel from one uniform.
double z_step_sample(const ZParams& params, double x, double t, double u);

// P_z(T_0 > t): 1 for t <= z, I_{z/t}(1-c, c) otherwise.
double t0_tail(const ZParams& params, double z, double t,
               const SpecialFnAccuracy& acc = {});

// T_0 = z / B with B ~ Beta(1-c, c) drawn by numeric inversion of the
// regularized incomplete beta.
double sample_t0(const ZParams& params, double z, RngStream& rng,
                 const SpecialFnAccuracy& acc = {});

// Exponential functional I = int_0^inf exp(zeta_t - t) dt of the compound
// Poisson process with intensity c and Exp(1) jumps; distributed as T_0
// started from z = 1.
double sample_exp_functional(const ZParams& params, RngStream& rng,
                             double trunc_tol = 1e-12);

// |max(t,x)^(1-c) - x^(1-c) - int_x^t (t-s)^(1-c) f_{T_0}(s) ds|; zero for
// the exact hitting-time density.
double harmonic_identity_residual(const ZParams& params, double x, double t,
                                  const SpecialFnAccuracy& acc = {});

// lim_{x->0} P_x(Z_t <= y | T_0 > t) = y/(y+t), independent of c.
double cond_limit_marginal_cdf(double t, double y);

// CDF of Z_1 under the Doob transform started at 0: density proportional
// to z^(1-c)/(1+z)^2, computed by quadrature.
double hat_marginal_cdf(const ZParams& params, double y,
                        const SpecialFnAccuracy& acc = {});

}  // namespace hitting
