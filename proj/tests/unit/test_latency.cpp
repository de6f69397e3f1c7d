#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mcrsim/error.hpp"
#include "mcrsim/latency.hpp"

using namespace mcrsim;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Independent k_q oracle: theta^(2/alpha) * int_{theta^(-2/alpha)}^inf h_q(v) dv
// with v = lo * t^(-m), m = 2 / (alpha/2 - 1), which maps the algebraic tail
// onto (0, 1] with an integrand vanishing linearly at t = 0.
double k_oracle(int n, int q, double theta, double alpha) {
  const double a = alpha / 2;
  const double lo = std::pow(theta, -1.0 / a);
  const double m = 2.0 / (a - 1.0);
  const auto h = [&](double v) {
    const double w = std::pow(v, -a);
    if (q == 0) return -std::expm1(-n * std::log1p(w));
    return std::pow(1.0 + std::pow(v, a), -q) * std::pow(1.0 + w, -n);
  };
  const auto g = [&](double t) {
    if (t == 0.0) return 0.0;
    return h(lo * std::pow(t, -m)) * m * lo * std::pow(t, -m - 1.0);
  };
  return std::pow(theta, 1.0 / a) * simpson(g, 0.0, 1.0, 200000);
}

NetworkScenario rayleigh_deli(double theta2, double alpha1) {
  NetworkScenario s;
  s.nt_m = s.nr_e = 1;
  s.theta2 = theta2;
  s.alpha1 = alpha1;
  return s;
}

}  // namespace

TEST_CASE("k coefficients match brute-force quadrature") {
  const auto c = sinr_coefficients(2, 1.0, 4.0);
  CHECK(std::abs(c.k[0] - k_oracle(2, 0, 1.0, 4.0)) < 1e-8);
  CHECK(std::abs(c.k[1] - k_oracle(2, 1, 1.0, 4.0)) < 1e-8);
  CHECK(std::abs(c.k[2] - k_oracle(2, 2, 1.0, 4.0)) < 1e-8);
  for (const double theta : {0.1, 3.0}) {
    for (const double alpha : {3.5, 4.5}) {
      const auto d = sinr_coefficients(4, theta, alpha);
      for (int q = 0; q <= 4; ++q)
        CHECK(d.k[static_cast<std::size_t>(q)] ==
              doctest::Approx(k_oracle(4, q, theta, alpha)).epsilon(1e-8));
    }
  }
  // n = 1, alpha = 4: k0 = sqrt(theta) * (pi/2 - atan(1/sqrt(theta))).
  for (const double theta : {0.1, 1.0, 10.0}) {
    const double rt = std::sqrt(theta);
    CHECK(sinr_coefficients(1, theta, 4.0).k[0] ==
          doctest::Approx(rt * (kPi / 2 - std::atan(1 / rt))).epsilon(1e-10));
  }
  CHECK(sinr_coefficients(2, 1e-12, 4.0).k[0] < 1e-5);
  CHECK_THROWS_AS(sinr_coefficients(0, 1.0, 4.0), Error);
  CHECK_THROWS_AS(sinr_coefficients(2, 1.0, 2.0), Error);
}

TEST_CASE("recursion structure") {
  const auto st = sinr_recursion(4, 1.0, 3.5, 5e-6, 200.0);
  CHECK(st.order == 4);
  CHECK(st.x.size() == 4u);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) CHECK(st.g[static_cast<std::size_t>(i * 4 + j)] == 0.0);
  CHECK(st.x0 == doctest::Approx(std::exp(-kPi * 5e-6 * 200.0 * 200.0 * st.k[0])));
  const auto one = sinr_recursion(1, 1.0, 3.5, 5e-6, 200.0);
  CHECK(one.correction_sum() == 0.0);
}

TEST_CASE("recursion equals the Taylor coefficients of exp") {
  // x_k is the z^k coefficient of x0 * exp(u * sum_j y_j z^j); expand the
  // exponential as sum_m P^m / m! by repeated polynomial products.
  const int n = 5;
  const double lambda = 5e-6, r = 180.0;
  const auto st = sinr_recursion(n, 2.0, 3.5, lambda, r);
  const double u = kPi * lambda * r * r;
  std::vector<double> p(n + 1, 0.0), power(n + 1, 0.0), series(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) p[static_cast<std::size_t>(j)] = u * st.y[static_cast<std::size_t>(j - 1)];
  power[0] = 1.0;
  double fact = 1.0;
  for (int m = 0; m <= n; ++m) {
    if (m > 0) {
      std::vector<double> next(n + 1, 0.0);
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
          next[static_cast<std::size_t>(a + b)] += power[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
      power = next;
      fact *= m;
    }
    for (int k = 0; k <= n; ++k) series[static_cast<std::size_t>(k)] += power[static_cast<std::size_t>(k)] / fact;
  }
  for (int k = 1; k <= n; ++k)
    CHECK(st.x[static_cast<std::size_t>(k - 1)] ==
          doctest::Approx(st.x0 * series[static_cast<std::size_t>(k)]).epsilon(1e-12));
}

TEST_CASE("control delivery success reduces to Rayleigh coverage") {
  // Interference-limited Rayleigh coverage with nearest association:
  // 1 / (1 + k0(theta, alpha)).
  const double expected = 1.0 / (1.0 + kPi / 4.0);
  CHECK(deli_success_prob(rayleigh_deli(1.0, 4.0)) == doctest::Approx(expected).epsilon(1e-8));
  for (const double theta : {0.1, 1.0, 5.0}) {
    const double k0 = sinr_coefficients(1, theta, 3.5).k[0];
    CHECK(deli_success_prob(rayleigh_deli(theta, 3.5)) ==
          doctest::Approx(1.0 / (1.0 + k0)).epsilon(1e-8));
  }
  NetworkScenario s;
  s.theta2 = 1e-9;
  CHECK(deli_success_prob(s) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("power-threshold success closed forms") {
  // alpha = 2: integral of e^-u (1 + a)... gives 1 - (a / (1 + a))^n with
  // a = theta * nt / (P * pi * lambda).
  const double lambda = 5e-5, power = 1.0;
  for (const int nt : {1, 2}) {
    for (const int nr : {1, 2, 3}) {
      for (const double theta : {1e-5, 1e-4, 1e-3}) {
        const double a = theta * nt / (power * kPi * lambda);
        const double expected = 1.0 - std::pow(a / (1.0 + a), nt * nr);
        CHECK(power_threshold_success(lambda, power, theta, 2.0, nt, nr) ==
              doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
  NetworkScenario s;
  s.nt_s = s.nr_u = 1;
  s.theta3 = 1e-4;
  CHECK(access_success_prob(s) ==
        doctest::Approx(kPi * s.lambda_s / (kPi * s.lambda_s + s.theta3 / s.p_s)).epsilon(1e-9));
}

TEST_CASE("Rayleigh special case agrees with the general path") {
  for (const double alpha : {2.5, 3.5, 4.0}) {
    for (const double theta : {1e-12, 1e-10, 1e-9}) {
      const double general = power_threshold_success(5e-6, 0.2, theta, alpha, 1, 1);
      const double rayleigh = rayleigh_power_threshold_success(5e-6, 0.2, theta, alpha);
      CHECK(std::abs(general - rayleigh) < 1e-8);
    }
  }
}

TEST_CASE("success probabilities are monotone in threshold and power") {
  const std::vector<double> thetas{1e-11, 1e-10, 3e-10, 1e-9, 3e-9};
  const std::vector<double> powers{0.05, 0.1, 0.2, 0.5, 1.0};
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < powers.size(); ++j) {
      const double p = power_threshold_success(5e-6, powers[j], thetas[i], 3.5, 2, 2);
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
      if (i > 0) CHECK(p <= power_threshold_success(5e-6, powers[j], thetas[i - 1], 3.5, 2, 2));
      if (j > 0) CHECK(p >= power_threshold_success(5e-6, powers[j - 1], thetas[i], 3.5, 2, 2));
    }
  }
  double prev = 1.0;
  for (const double theta2 : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    NetworkScenario s;
    s.theta2 = theta2;
    const double p = deli_success_prob(s);
    CHECK(p > 0.0);
    CHECK(p <= prev);
    prev = p;
  }
  // Transmit power enters deli only through noise, which the closed form
  // neglects; it must not decrease the probability.
  NetworkScenario weak, strong;
  weak.p_m = 5.0;
  strong.p_m = 40.0;
  CHECK(deli_success_prob(strong) >= deli_success_prob(weak));
}

TEST_CASE("delay components") {
  NetworkScenario s;
  CHECK(uplink_queue_delay(s) == doctest::Approx(0.002).epsilon(1e-12));
  s.theta1 = 1e-30;
  CHECK(uplink_transmission_delay(s) == doctest::Approx(s.t_ul_req).epsilon(1e-9));
  s = {};
  s.mu = 1e4;
  try {
    uplink_queue_delay(s);
    FAIL("expected instability");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invariant);
  }
  s = {};
  CHECK(fiber_delay(s) == doctest::Approx(0.01).epsilon(1e-15));
  s.l_fiber = 2e6;
  CHECK(fiber_delay(s) == doctest::Approx(0.02).epsilon(1e-15));
  s.l_fiber = 0.0;
  CHECK(fiber_delay(s) == 0.0);
  s = {};
  s.theta3 = 1e-30;
  CHECK(access_delay(s) == doctest::Approx(s.t_dl_as).epsilon(1e-9));
  s = {};
  CHECK(deli_delay(s) == doctest::Approx(s.t_dl_deli / deli_success_prob(s)).epsilon(1e-15));
}

TEST_CASE("total latency is the sum of its parts") {
  NetworkScenario s;
  const double d_bh = 0.0123;
  const auto d = total_latency(s, 0.7, d_bh);
  CHECK(d.total == doctest::Approx(uplink_request_delay(s) + deli_delay(s) + d_bh +
                                   access_delay(s) + 0.3 * fiber_delay(s))
                       .epsilon(1e-14));
  CHECK(total_latency(s, 1.0, d_bh).d_fiber_term == 0.0);
  CHECK(total_latency(s, 0.0, d_bh).d_fiber_term == fiber_delay(s));
  CHECK_THROWS_AS(total_latency(s, 1.5, d_bh), Error);
  CHECK_THROWS_AS(total_latency(s, 0.5, -1.0), Error);
}
