#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mcrsim/energy.hpp"
#include "mcrsim/error.hpp"
#include "mcrsim/latency.hpp"
#include "mcrsim/popularity.hpp"
#include "mcrsim/route.hpp"
#include "mcrsim/seem.hpp"

using namespace mcrsim;

namespace {

// Continuous-hop MCR delay written directly in lambda_e: every r_i scales as
// 1/sqrt(lambda_e), so D = N tau (1 + c ls/le) / (p2 r_mmw sqrt(le) sum 1/c_i).
double oracle_backhaul(const NetworkScenario& s, double le, int b) {
  double inv = 0.0;
  double c = 0.5;
  for (int i = 1; i <= b; ++i) {
    if (i > 1) c *= (2.0 * i - 1.0) / (2.0 * i - 2.0);
    if (c / std::sqrt(le) > s.r_max) return std::numeric_limits<double>::infinity();
    inv += 1.0 / c;
  }
  const double p2 = 0.5 * std::erfc(-mmwave_link_margin(s) / (std::sqrt(2.0) * s.sigma_db));
  return std::ceil(s.buffer_omega / s.packet_l) * s.tau_mmw * (1.0 + s.relay_factor * s.lambda_s / le) /
         (p2 * s.r_mmw * std::sqrt(le) * inv);
}

double oracle_hit(double beta, int k_total, int psi) {
  long double norm = 0.0L, top = 0.0L;
  for (int k = 1; k <= k_total; ++k) {
    const long double w = std::pow(static_cast<long double>(k), -static_cast<long double>(beta));
    norm += w;
    if (k <= psi) top += w;
  }
  return static_cast<double>(top / norm);
}

struct OraclePair {
  bool feasible = false;
  double lambda_e = 0.0;
  double e_sys = 0.0;
};

OraclePair oracle_pair(const NetworkScenario& s, const EnergyModel& em, const ContentPlan& c,
                       int psi, double budget, int b) {
  const double fiber = 2.0 * s.l_fiber / s.v_fiber * (1.0 - oracle_hit(c.beta, c.k_total, psi));
  const auto g = [&](double le) { return oracle_backhaul(s, le, b) + fiber - budget; };
  OraclePair out;
  if (fiber > budget || g(s.lambda_s) > 0.0) return out;
  double lo = s.lambda_m, hi = s.lambda_s;
  if (g(lo) <= 0.0) {
    hi = lo;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
  }
  NetworkScenario at = s;
  at.lambda_e = hi;
  out.feasible = true;
  out.lambda_e = hi;
  out.e_sys = system_energy(at, em, psi).total;
  return out;
}

}  // namespace

TEST_CASE("reduced budget") {
  NetworkScenario s;
  CHECK(reduced_delay_budget(s) ==
        doctest::Approx(s.d_max - uplink_request_delay(s) - deli_delay(s) - access_delay(s))
            .epsilon(1e-15));
  CHECK(reduced_delay_budget(s) > 0.0);
  CHECK(reduced_delay_budget(s) < s.d_max);
}

TEST_CASE("optimizer matches brute-force enumeration") {
  NetworkScenario s;
  EnergyModel em;
  for (const double dmax : {15e-3, 20e-3, 30e-3}) {
    s.d_max = dmax;
    for (const int b : {1, 4}) {
      ContentPlan c;
      SeemOptions opt;
      opt.b_paths = b;
      const SeemOutcome out = seem_optimize(s, em, c, opt);
      int best_psi = 0;
      double best_e = std::numeric_limits<double>::infinity();
      std::size_t feasible = 0;
      for (int psi = 1; psi <= c.k_total; ++psi) {
        const OraclePair o = oracle_pair(s, em, c, psi, out.budget, b);
        if (!o.feasible) continue;
        ++feasible;
        if (o.e_sys < best_e) {
          best_e = o.e_sys;
          best_psi = psi;
        }
      }
      CAPTURE(dmax);
      CAPTURE(b);
      REQUIRE(feasible == out.feasible_set.size());
      CHECK(out.best.psi == best_psi);
      CHECK(std::abs(out.e_sys_min - best_e) <= 1e-9 * best_e);
      for (const auto& p : out.feasible_set) {
        const OraclePair o = oracle_pair(s, em, c, p.psi, out.budget, b);
        CHECK(std::abs(p.lambda_e_crit - o.lambda_e) <= 1e-9 * o.lambda_e);
      }
    }
  }
}

TEST_CASE("best is the argmin of the feasible set") {
  const SeemOutcome out = seem_optimize({}, {}, {});
  CHECK(out.feasible_set.size() + out.skipped.size() == 500);
  for (const auto& p : out.feasible_set) CHECK(out.best.e_sys <= p.e_sys);
  for (const auto& p : out.feasible_set) {
    if (p.e_sys == out.best.e_sys) {
      CHECK(p.psi >= out.best.psi);
    }
  }
  for (std::size_t i = 1; i < out.feasible_set.size(); ++i)
    CHECK(out.feasible_set[i].psi > out.feasible_set[i - 1].psi);
}

TEST_CASE("parallel optimisation is bit-exact") {
  SeemOptions one, four;
  four.jobs = 4;
  const SeemOutcome a = seem_optimize({}, {}, {}, one);
  const SeemOutcome b = seem_optimize({}, {}, {}, four);
  REQUIRE(a.feasible_set.size() == b.feasible_set.size());
  CHECK(a.best.psi == b.best.psi);
  CHECK(a.e_sys_min == b.e_sys_min);
  for (std::size_t i = 0; i < a.feasible_set.size(); ++i) {
    CHECK(a.feasible_set[i].psi == b.feasible_set[i].psi);
    CHECK(a.feasible_set[i].lambda_e_crit == b.feasible_set[i].lambda_e_crit);
    CHECK(a.feasible_set[i].e_sys == b.feasible_set[i].e_sys);
  }
}

TEST_CASE("critical density solves the constraint") {
  NetworkScenario s;
  const PopularityModel pop = zipf(0.8, 500);
  const double budget = reduced_delay_budget(s);
  const CriticalDensity c = critical_edc_density(s, pop, 144, budget);
  REQUIRE(c.status == CriticalStatus::found);
  CHECK_FALSE(c.at_lower_bound);
  CHECK(c.residual <= 1e-9);
  NetworkScenario at = s;
  at.lambda_e = c.lambda_e;
  const double total =
      mcr_backhaul_delay(at) + fiber_delay(s) * (1.0 - hit_probability(pop, 144));
  CHECK(std::abs(total - budget) <= 1e-9);
  CHECK_THROWS_AS(critical_edc_density(s, pop, 0, budget), Error);
  CHECK_THROWS_AS(critical_edc_density(s, pop, 501, budget), Error);
}

TEST_CASE("critical density falls as the cache grows") {
  NetworkScenario s;
  const PopularityModel pop = zipf(0.8, 500);
  const double budget = reduced_delay_budget(s);
  double prev = std::numeric_limits<double>::infinity();
  bool was_feasible = false;
  for (int psi = 1; psi <= 500; psi += 7) {
    bool feasible = true;
    try {
      const CriticalDensity c = critical_edc_density(s, pop, psi, budget);
      feasible = c.status == CriticalStatus::found;
      if (feasible) {
        CHECK(c.lambda_e <= prev);
        prev = c.lambda_e;
      }
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::infeasible);
      feasible = false;
    }
    // Once feasible, larger caches stay feasible.
    if (was_feasible) CHECK(feasible);
    was_feasible = was_feasible || feasible;
  }
}

TEST_CASE("boundary budgets") {
  NetworkScenario s;
  const PopularityModel pop = zipf(0.8, 500);
  const CriticalDensity slack =
      critical_edc_density(s, pop, 10, std::numeric_limits<double>::infinity());
  CHECK(slack.at_lower_bound);
  CHECK(slack.lambda_e == s.lambda_m);
  const CriticalDensity starved = critical_edc_density(s, pop, 10, 1e-3);
  CHECK(starved.status == CriticalStatus::fiber_exceeds_budget);

  s.d_max = 3e-3;  // below the wireless delays alone
  try {
    seem_optimize(s, {}, {});
    FAIL("expected NoFeasiblePair");
  } catch (const NoFeasiblePair& e) {
    CHECK(e.code() == ErrorCode::infeasible);
    CHECK(e.budget() == doctest::Approx(reduced_delay_budget(s)).epsilon(1e-15));
  }
}

TEST_CASE("a larger budget never costs more energy") {
  NetworkScenario s;
  double prev = std::numeric_limits<double>::infinity();
  for (const double dmax : {15e-3, 18e-3, 20e-3, 25e-3, 30e-3, 40e-3}) {
    s.d_max = dmax;
    const SeemOutcome out = seem_optimize(s, {}, {});
    CHECK(out.e_sys_min <= prev);
    prev = out.e_sys_min;
  }
}

TEST_CASE("multipath needs less energy than a single path") {
  SeemOptions single;
  single.b_paths = 1;
  const SeemOutcome mcr = seem_optimize({}, {}, {});
  const SeemOutcome one = seem_optimize({}, {}, {}, single);
  CHECK(mcr.e_sys_min < one.e_sys_min);
}
