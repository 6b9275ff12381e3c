#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace hitting {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fv = (i == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * fv;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fv;
  }
  result = kronrod * half;
  err = std::abs(kronrod - gauss) * half;
}

struct Panel {
  double a, b, result, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

// Globally adaptive: split the worst panel until the summed error estimate
// meets the tolerance, so endpoint singularities only cost extra panels.
template <typename F>
double adapt(const F& f, double a, double b, double abs_tol, double rel_tol,
             int max_panels) {
  std::priority_queue<Panel> queue;
  Panel whole{a, b, 0.0, 0.0};
  gk15(f, a, b, whole.result, whole.err);
  queue.push(whole);
  double total = whole.result, total_err = whole.err;
  int panels = 1;
  while (total_err > abs_tol && total_err > rel_tol * std::abs(total)) {
    if (panels >= max_panels)
      throw QuadratureError("adaptive quadrature failed to converge");
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    gk15(f, left.a, left.b, left.result, left.err);
    gk15(f, right.a, right.b, right.result, right.err);
    total += left.result + right.result - worst.result;
    total_err += left.err + right.err - worst.err;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  return total;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-300) {
  if (a == b) return 0.0;
  return detail::adapt(f, a, b, abs_tol, rel_tol, 4000);
}

// Integral over [a, infinity) via the substitution y = a + u/(1-u).
template <typename F>
double integrate_to_inf(const F& f, double a, double rel_tol = 1e-10) {
  auto g = [&](double u) {
    const double one_minus = 1.0 - u;
    const double y = a + u / one_minus;
    return f(y) / (one_minus * one_minus);
  };
  return detail::adapt(g, 0.0, 1.0, 1e-300, rel_tol, 4000);
}

}  // namespace hitting
