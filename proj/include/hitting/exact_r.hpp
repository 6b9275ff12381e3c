#pragma once

#include <string>
#include <vector>

#include "hitting/innovations.hpp"

namespace hitting {

// Exact (closed-form and recursive) quantities for the random exchange chain
// R_n = max(R_{n-1} - 1, eta_n) killed at level x0, plus the U_eps integral
// calculus shared by the asymptotic checks.

// p[k] = P(eta <= x0 + k), q[k] = P(eta > x0 + k), k = 0..kmax. Both are
// kept: q holds full relative precision where p rounds to 1, and the tail
// recursion needs differences of the q's.
struct CdfGrid {
  double x0 = 0.0;
  std::vector<double> p;
  std::vector<double> q;

  int kmax() const { return static_cast<int>(p.size()) - 1; }
};

// v[n] = P_{x} (T > n) for x in (x0, x0+1]; d[m] and c_seq[n] are the
// survival-increment weights of the generating-function decomposition.
struct TailTable {
  CdfGrid grid;
  std::vector<double> v;       // v[n] = v(n,0)
  std::vector<double> d;       // d[m] = prod_{j<m} p[j] - prod_{j<=m} p[j]
  std::vector<double> c_seq;   // c_seq[n] = P(eta > x0 + n - 1), n >= 1
  std::vector<double> prefix;  // prefix[m] = prod_{j<m} p[j]
};

// G[n] = harmonic value on the cell (x0+n, x0+n+1], normalized G[0] = 1.
struct HarmonicTable {
  CdfGrid grid;
  std::vector<double> G;
};

// Exact CDF values P(eta <= x0+k). Throws unless
// P(eta <= x0) P(eta > x0) > 0.
CdfGrid cdf_grid(const InnovationModel& model, double x0, int kmax);

// Piecewise-constant harmonic function of the killed chain:
// G = 1 on (x0, x0+1], G(x0+n+1) - G(x0+n) = prod_{k<n} p[k]. Throws for
// x <= x0.
double harmonic_G(const CdfGrid& grid, double x);

HarmonicTable harmonic_table(const CdfGrid& grid, int nmax);

// Residual of G(x) = E_x[G(R_1); R_1 > x0]. Zero (to rounding) exactly when
// E[eta^+] is infinite; the defect at x in (x0, x0+1] equals the limit of
// the products prod_{k<=N} p[k] otherwise.
double check_harmonicity(const InnovationModel& model, double x0, double x,
                         double rel_tol = 1e-8);

// P_x(T = infinity) for a transient chain; throws if the series
// sum_j prod_{k<j} p[k] fails to converge on the grid.
double transient_return_prob(const CdfGrid& grid, double x);

// E_x[T] per the closed-form product formula; +infinity when the infinite
// product of the p[k] vanishes (infinite-mean eta).
double expected_T_exact(const CdfGrid& grid, double x);

// Survival recursion for v_n = v(n,0); O(nmax^2) arithmetic.
TailTable tail_table(const CdfGrid& grid, int nmax);

// v(n,k) = P_x(T > n) for x in (x0+k, x0+k+1]; equals 1 for n <= k.
double tail_at(const TailTable& table, int n, int k);

// U_eps(x) = int_0^x exp(-(1+eps) u0(y)) dy with u0(y) = int_0^y P(eta>t) dt.
// Closed form for LogTail, nested quadrature otherwise.
double u0_integral(const InnovationModel& model, double x);
double ueps_integral(const InnovationModel& model, double x, double eps);

// kappa(c) = 1/((1-c) B(c,1-c)) = sin(pi c) / ((1-c) pi), c in (0,1).
double kappa(double c);

// One-step drift of U0 + U_eps along the AR(1) chain in log_A coordinates:
// E[U0(step)+U_eps(step)] - U0(z) - U_eps(z) with
// step = log_A(A^(z-1) + A^eta). Negative for large z when eps > 0;
// nonnegative at eps = 0 (submartingale direction).
double drift_residual(const LogTail& model, double big_a, double z,
                      double eps);

// c = 1 / (2 sum_{j>=1} j^-2) = 3 / pi^2.
double cj_constant();

// c_j(y) = P(xi > A^j c y / (j+1)^2), evaluated through the eta tail.
double cj(const InnovationModel& model, double big_a, double y, int j);

// C(y) = sum_{k>=0} c_k(y), summed until the remainder estimate drops
// below tol; throws if the series fails to converge by jmax terms.
double c_big(const InnovationModel& model, double big_a, double y, int jmax,
             double tol);

// CSV export (columns n,v_n and n,G_n) for plotting.
void write_tail_csv(const TailTable& table, const std::string& path);
void write_harmonic_csv(const HarmonicTable& table, const std::string& path);

}  // namespace hitting
