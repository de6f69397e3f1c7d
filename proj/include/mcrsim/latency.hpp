#pragma once

#include <vector>

#include "mcrsim/numerics.hpp"
#include "mcrsim/scenario.hpp"

namespace mcrsim {

struct DelayBreakdown {
  double d_ul_req_tx = 0.0;
  double d_ul_req_queue = 0.0;
  double d_dl_deli = 0.0;
  double d_dl_bh = 0.0;
  double d_dl_as = 0.0;
  double d_fiber_term = 0.0;
  double total = 0.0;
};

// Distance-independent coefficients of the MBS-to-EDC coverage expansion:
// k[0] is the interference Laplace exponent, k[q] (q >= 1) the derivative
// weights, y[q-1] = C(n+q-1, q) * k[q].
struct SinrCoefficients {
  int order = 1;  // n = nt_m * nr_e
  std::vector<double> k;
  std::vector<double> y;
};

// The expansion evaluated at one serving distance. g is n x n, row-major and
// strictly lower triangular; x[j] (j = 0..n-1) is the (j+1)-th derivative term.
struct SinrRecursionState {
  int order = 1;
  std::vector<double> k;
  std::vector<double> y;
  std::vector<double> g;
  double x0 = 0.0;
  std::vector<double> x;

  // Sum of the first n-1 derivative terms (empty sum when n == 1).
  double correction_sum() const;
};

SinrCoefficients sinr_coefficients(int n, double theta2, double alpha1,
                                   const numerics::QuadratureSpec& quad = {});

SinrRecursionState sinr_recursion(int n, double theta2, double alpha1,
                                  double lambda_m, double r,
                                  const numerics::QuadratureSpec& quad = {});

SinrRecursionState sinr_recursion(const SinrCoefficients& coeffs,
                                  double lambda_m, double r);

// Nearest-station received-power success with Gamma(n, 1) aggregate gain:
// E_r[ P(g >= threshold * nt * r^alpha / power) ], r nearest in a PPP.
double power_threshold_success(double lambda, double power, double threshold,
                               double alpha, int nt, int nr,
                               const numerics::QuadratureSpec& quad = {});

// The single-antenna special case evaluated through the exponential tail
// directly rather than the Gamma partial sum.
double rayleigh_power_threshold_success(double lambda, double power,
                                        double threshold, double alpha,
                                        const numerics::QuadratureSpec& quad = {});

double uplink_success_prob(const NetworkScenario& s);
double uplink_transmission_delay(const NetworkScenario& s);
double uplink_queue_delay(const NetworkScenario& s);
double uplink_request_delay(const NetworkScenario& s);

double deli_success_prob(const NetworkScenario& s);
double deli_delay(const NetworkScenario& s);

double access_success_prob(const NetworkScenario& s);
double access_delay(const NetworkScenario& s);

double fiber_delay(const NetworkScenario& s);

DelayBreakdown total_latency(const NetworkScenario& s, double p_hit, double d_bh);

}  // namespace mcrsim
