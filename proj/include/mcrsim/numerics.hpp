#pragma once

#include <functional>

namespace mcrsim::numerics {

enum class Truncation {
  none,      // fail when the mapped integral does not converge
  fallback,  // retry on [lower, X] where |f(X)| < abs_tol * peak
};

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  Truncation truncation = Truncation::fallback;
  // Characteristic length of the integrand; the semi-infinite map is
  // x = lower + scale * t / (1 - t).
  double scale = 1.0;

  void validate() const;
};

using Integrand = std::function<double(double)>;

double gamma_fn(double x);
double erf_fn(double x);

// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
double integrate(const Integrand& f, double a, double b,
                 const QuadratureSpec& spec = {});

double integrate_semi_infinite(const Integrand& f, double lower,
                               const QuadratureSpec& spec = {});

// Bisection on a monotone function with a sign change over [lo, hi].
// Stops when |g(x)| <= tol or the bracket is narrower than tol.
double find_root_monotone(const std::function<double(double)>& g, double lo,
                          double hi, double tol);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace mcrsim::numerics
