#include <cmath>
#include <limits>

#include "doctest.h"
#include "mcrsim/energy.hpp"

using namespace mcrsim;

TEST_CASE("qos indicator boundary") {
  CHECK(qos_indicator(0.02, 0.02) == 1);
  CHECK(qos_indicator(std::nextafter(0.02, 1.0), 0.02) == 0);
  CHECK(qos_indicator(0.0, 0.02) == 1);
}

TEST_CASE("service effective energy") {
  CHECK(service_effective_energy(3.3226e6, 0) == 0.0);
  CHECK(service_effective_energy(3.3226e6, 1) == 3.3226e6);
}

TEST_CASE("system energy worked values") {
  NetworkScenario s;
  EnergyModel em;
  SystemEnergy e = system_energy(s, em, 0);
  // SBS tier: 5e-5 * (7.84 * 1 + 71) W * 5 years.
  CHECK(e.sbs == doctest::Approx(5e-5 * 78.84 * 1.5768e8).epsilon(1e-12));
  CHECK(e.sbs == doctest::Approx(6.216e5).epsilon(1e-3));
  s.lambda_e = 9.873e-6;
  e = system_energy(s, em, 144);
  CHECK(e.storage == doctest::Approx(144 * 8e6 * 9.873e-6).epsilon(1e-12));
  CHECK(e.storage == doctest::Approx(1.137e4).epsilon(1e-3));
  CHECK(e.mbs + e.sbs + e.edc + e.storage == doctest::Approx(e.total).epsilon(1e-9));

  NetworkScenario empty = s;
  empty.lambda_m = empty.lambda_s = empty.lambda_e = 0.0;
  CHECK(system_energy(empty, em, 144).total == 0.0);
}

TEST_CASE("system energy monotonicity") {
  NetworkScenario s;
  EnergyModel em;
  double prev = -1;
  for (double le = 6e-6; le < 5e-5; le += 4e-6) {
    s.lambda_e = le;
    const double e = system_energy(s, em, 144).total;
    CHECK(e > prev);
    prev = e;
  }
  s = {};
  prev = -1;
  for (int psi = 0; psi <= 500; psi += 25) {
    const double e = system_energy(s, em, psi).total;
    CHECK(e > prev);
    prev = e;
  }
  // Affine in lambda_e.
  const auto at = [&](double le) {
    NetworkScenario t;
    t.lambda_e = le;
    return system_energy(t, em, 100).total;
  };
  CHECK(at(2e-5) - at(1e-5) == doctest::Approx(at(3e-5) - at(2e-5)).epsilon(1e-9));
}

TEST_CASE("evaluate_see gates on the delay threshold") {
  NetworkScenario s;
  EnergyModel em;
  const SeeResult ok = evaluate_see(s, em, 144, s.d_max);
  CHECK(ok.qos == 1);
  CHECK(ok.e_see == ok.e_sys.total);
  const SeeResult late = evaluate_see(s, em, 144, s.d_max * 1.01);
  CHECK(late.qos == 0);
  CHECK(late.e_see == 0.0);
}
