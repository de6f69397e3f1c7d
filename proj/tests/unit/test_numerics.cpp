#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mcrsim/error.hpp"
#include "mcrsim/numerics.hpp"
#include "mcrsim/random.hpp"

using namespace mcrsim;
using namespace mcrsim::numerics;

TEST_CASE("gamma function values and recurrence") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  for (double x = 0.5; x <= 20.0; x += 0.25)
    CHECK(std::abs(gamma_fn(x + 1) - x * gamma_fn(x)) <= 1e-10 * gamma_fn(x + 1));
  CHECK_THROWS_AS(gamma_fn(0.0), Error);
  CHECK_THROWS_AS(gamma_fn(-1.5), Error);
}

TEST_CASE("erf reference values and symmetry") {
  // Reference values to 16 digits (Abramowitz & Stegun table, extended).
  CHECK(std::abs(erf_fn(0.5) - 0.5204998778130465) < 1e-15);
  CHECK(std::abs(erf_fn(1.0) - 0.8427007929497149) < 1e-12);
  CHECK(std::abs(erf_fn(2.0) - 0.9953222650189527) < 1e-15);
  CHECK(erf_fn(0.0) == 0.0);
  for (double x : {0.1, 0.7, 1.3, 3.0}) CHECK(erf_fn(-x) == -erf_fn(x));
}

TEST_CASE("finite integration is exact on polynomials") {
  for (int k = 0; k <= 20; ++k) {
    const double v = integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
    CHECK(v == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
  }
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("semi-infinite integrals") {
  CHECK(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));
  const double lambda = 1e-5;
  QuadratureSpec spec;
  spec.scale = 1.0 / std::sqrt(lambda);
  const double pi = std::numbers::pi;
  CHECK(integrate_semi_infinite(
            [&](double x) { return 2 * pi * lambda * x * std::exp(-lambda * pi * x * x); }, 0.0,
            spec) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_semi_infinite([&](double x) { return std::exp(-lambda * pi * x * x); }, 0.0,
                                spec) == doctest::Approx(0.5 / std::sqrt(lambda)).epsilon(1e-10));
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.max_subdivisions = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.truncation = Truncation::none;
  spec.max_subdivisions = 1;
  CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x); }, 0.0, spec),
                  Error);
}

TEST_CASE("monotone root finding") {
  CHECK(find_root_monotone([](double x) { return x - 2; }, 0, 5, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(find_root_monotone([](double x) { return 1 / std::sqrt(x) - 1; }, 0.25, 4, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-11));
  const auto g = [](double x) { return x * x * x - 2; };
  const double narrow = find_root_monotone(g, 1, 2, 1e-12);
  const double wide = find_root_monotone(g, 0, 100, 1e-12);
  CHECK(std::abs(narrow - wide) < 1e-11);
  CHECK(narrow == doctest::Approx(std::cbrt(2.0)).epsilon(1e-11));
  try {
    find_root_monotone(g, 2, 3, 1e-12);
    FAIL("expected no-sign-change error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numerical);
  }
}

TEST_CASE("dB conversions are exact to 1e-12") {
  CHECK(dbm_to_watts(23) == doctest::Approx(std::pow(10.0, -0.7)).epsilon(1e-12));
  CHECK(dbm_to_watts(30) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(db_to_linear(10) == doctest::Approx(10.0).epsilon(1e-15));
  for (double v : {-174.0, -90.0, 0.0, 43.0})
    CHECK(watts_to_dbm(dbm_to_watts(v)) == doctest::Approx(v).epsilon(1e-12));
  for (double v : {1e-21, 0.5, 3.0})
    CHECK(db_to_linear(linear_to_db(v)) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("Philox4x32-10 known answer") {
  // Published test vectors of the Random123 reference implementation.
  auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
  out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);
  out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("Philox streams are reproducible and distinct") {
  Philox4x32 a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  Philox4x32 u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}
