#include "mcrsim/latency.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mcrsim/error.hpp"

namespace mcrsim {

namespace {

constexpr double kPi = std::numbers::pi;

// P(g >= z) for g ~ Gamma(n, 1): e^-z * sum_{t<n} z^t / t!.
double gamma_upper_tail(int n, double z) {
  double term = std::exp(-z);
  double sum = term;
  for (int t = 1; t < n; ++t) {
    term *= z / t;
    sum += term;
  }
  return sum;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// theta^(2/alpha) * integral over [theta^(-2/alpha), inf) of h_q(v) dv with
// h_0 = 1 - (1 + v^(-alpha/2))^(-n) and
// h_q = (1 + v^(alpha/2))^(-q) (1 + v^(-alpha/2))^(-n).
// With a = alpha/2 the map s = v^(1-a) turns the algebraic tail into a smooth
// integrand on (0, theta^((a-1)/a)]; w = v^(-a) = s^(a/(a-1)).
double laplace_coefficient(int n, int q, double theta, double alpha,
                           const numerics::QuadratureSpec& quad) {
  const double a = alpha / 2.0;
  const double s0 = std::pow(theta, (a - 1.0) / a);
  const double w_exp = a / (a - 1.0);
  const numerics::Integrand integrand = [&](double s) {
    const double w = std::pow(s, w_exp);
    if (q == 0) {
      if (w == 0.0) return n / (a - 1.0);
      return -std::expm1(-n * std::log1p(w)) / ((a - 1.0) * w);
    }
    return std::pow(w, q - 1) / ((a - 1.0) * std::pow(1.0 + w, q + n));
  };
  return std::pow(theta, 1.0 / a) * numerics::integrate(integrand, 0.0, s0, quad);
}

}  // namespace

double SinrRecursionState::correction_sum() const {
  double sum = 0.0;
  for (int j = 0; j + 1 < order; ++j) sum += x[static_cast<std::size_t>(j)];
  return sum;
}

SinrCoefficients sinr_coefficients(int n, double theta2, double alpha1,
                                   const numerics::QuadratureSpec& quad) {
  if (n < 1) throw Error(ErrorCode::argument, "SINR expansion order must be >= 1");
  if (!(alpha1 > 2.0)) throw Error(ErrorCode::argument, "alpha1 must exceed 2");
  if (!(theta2 > 0.0)) throw Error(ErrorCode::argument, "theta2 must be > 0");
  SinrCoefficients c;
  c.order = n;
  c.k.resize(static_cast<std::size_t>(n) + 1);
  c.y.resize(static_cast<std::size_t>(n));
  for (int q = 0; q <= n; ++q) {
    const double kq = laplace_coefficient(n, q, theta2, alpha1, quad);
    if (!std::isfinite(kq)) {
      std::ostringstream msg;
      msg << "coefficient k_" << q << " is not finite";
      throw Error(ErrorCode::numerical, msg.str());
    }
    c.k[static_cast<std::size_t>(q)] = kq;
  }
  for (int q = 1; q <= n; ++q)
    c.y[static_cast<std::size_t>(q - 1)] = binomial(n + q - 1, q) * c.k[static_cast<std::size_t>(q)];
  return c;
}

SinrRecursionState sinr_recursion(const SinrCoefficients& coeffs, double lambda_m,
                                  double r) {
  const int n = coeffs.order;
  const auto un = static_cast<std::size_t>(n);
  SinrRecursionState st;
  st.order = n;
  st.k = coeffs.k;
  st.y = coeffs.y;
  st.g.assign(un * un, 0.0);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j)
      st.g[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] =
          static_cast<double>(i - j) / (i + 1) * coeffs.y[static_cast<std::size_t>(i - j - 1)];

  const double u = kPi * lambda_m * r * r;
  st.x0 = std::exp(-u * coeffs.k[0]);
  st.x.assign(un, 0.0);
  // x = sum_{t=1..n} u^t x0 G^(t-1) y; G is nilpotent so the series is exact.
  std::vector<double> v = coeffs.y;
  std::vector<double> next(un);
  double ut = 1.0;
  for (int t = 1; t <= n; ++t) {
    ut *= u;
    for (std::size_t i = 0; i < un; ++i) st.x[i] += ut * st.x0 * v[i];
    for (std::size_t i = 0; i < un; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < i; ++j) acc += st.g[i * un + j] * v[j];
      next[i] = acc;
    }
    v.swap(next);
  }
  return st;
}

SinrRecursionState sinr_recursion(int n, double theta2, double alpha1, double lambda_m,
                                  double r, const numerics::QuadratureSpec& quad) {
  return sinr_recursion(sinr_coefficients(n, theta2, alpha1, quad), lambda_m, r);
}

double power_threshold_success(double lambda, double power, double threshold,
                               double alpha, int nt, int nr,
                               const numerics::QuadratureSpec& quad) {
  const int n = nt * nr;
  const double c = threshold * nt / power;
  // u = pi * lambda * r^2 turns the nearest-distance density into e^-u du.
  const numerics::Integrand integrand = [&](double u) {
    const double z = c * std::pow(u / (kPi * lambda), alpha / 2.0);
    return std::exp(-u) * gamma_upper_tail(n, z);
  };
  return numerics::integrate_semi_infinite(integrand, 0.0, quad);
}

double rayleigh_power_threshold_success(double lambda, double power, double threshold,
                                        double alpha, const numerics::QuadratureSpec& quad) {
  const double c = threshold / power;
  const numerics::Integrand integrand = [&](double u) {
    return std::exp(-u - c * std::pow(u / (kPi * lambda), alpha / 2.0));
  };
  return numerics::integrate_semi_infinite(integrand, 0.0, quad);
}

double uplink_success_prob(const NetworkScenario& s) {
  return power_threshold_success(s.lambda_m, s.p_u, s.theta1, s.alpha1, s.nt_u, s.nr_m);
}

double uplink_transmission_delay(const NetworkScenario& s) {
  return s.t_ul_req / uplink_success_prob(s);
}

double uplink_queue_delay(const NetworkScenario& s) {
  const double arrival = s.chi * s.lambda_u;
  if (!(s.mu > arrival)) {
    std::ostringstream msg;
    msg << "MBS queue unstable: arrival rate " << arrival << " >= service rate " << s.mu;
    throw Error(ErrorCode::invariant, msg.str());
  }
  return 1.0 / (s.mu - arrival);
}

double uplink_request_delay(const NetworkScenario& s) {
  return uplink_transmission_delay(s) + uplink_queue_delay(s);
}

double deli_success_prob(const NetworkScenario& s) {
  const SinrCoefficients coeffs = sinr_coefficients(s.nt_m * s.nr_e, s.theta2, s.alpha1);
  const int n = coeffs.order;
  const numerics::Integrand integrand = [&](double u) {
    // Same assembly as sinr_recursion, specialised to u = pi lambda r^2.
    const double r = std::sqrt(u / (kPi * s.lambda_m));
    const SinrRecursionState st = sinr_recursion(coeffs, s.lambda_m, r);
    return std::exp(-u) * (st.x0 + (n > 1 ? st.correction_sum() : 0.0));
  };
  return numerics::integrate_semi_infinite(integrand, 0.0);
}

double deli_delay(const NetworkScenario& s) { return s.t_dl_deli / deli_success_prob(s); }

double access_success_prob(const NetworkScenario& s) {
  return power_threshold_success(s.lambda_s, s.p_s, s.theta3, s.alpha2, s.nt_s, s.nr_u);
}

double access_delay(const NetworkScenario& s) { return s.t_dl_as / access_success_prob(s); }

double fiber_delay(const NetworkScenario& s) { return 2.0 * s.l_fiber / s.v_fiber; }

DelayBreakdown total_latency(const NetworkScenario& s, double p_hit, double d_bh) {
  if (!(p_hit >= 0.0 && p_hit <= 1.0))
    throw Error(ErrorCode::argument, "hit probability must lie in [0, 1]");
  if (!(d_bh >= 0.0)) throw Error(ErrorCode::argument, "backhaul delay must be >= 0");
  DelayBreakdown d;
  d.d_ul_req_tx = uplink_transmission_delay(s);
  d.d_ul_req_queue = uplink_queue_delay(s);
  d.d_dl_deli = deli_delay(s);
  d.d_dl_bh = d_bh;
  d.d_dl_as = access_delay(s);
  d.d_fiber_term = fiber_delay(s) * (1.0 - p_hit);
  d.total = d.d_ul_req_tx + d.d_ul_req_queue + d.d_dl_deli + d.d_dl_bh + d.d_dl_as +
            d.d_fiber_term;
  return d;
}

}  // namespace mcrsim
