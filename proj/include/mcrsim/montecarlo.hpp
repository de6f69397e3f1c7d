#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcrsim/scenario.hpp"

namespace mcrsim {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct SampledTopology {
  double region_radius = 0.0;
  std::vector<Point> mbs, sbs, edc, users;
  double lambda_m = 0.0, lambda_s = 0.0, lambda_e = 0.0, lambda_u = 0.0;
  std::uint64_t seed = 0;

  std::uint64_t hash() const;
};

// Poisson(lambda * pi * R^2) points uniform on the disc of radius R centred at
// the origin, drawn from substream `substream` of `seed`.
std::vector<Point> sample_ppp(double lambda, double region_radius,
                              std::uint64_t seed, std::uint64_t substream = 0);

SampledTopology sample_topology(const NetworkScenario& s, double region_radius,
                                std::uint64_t seed);

// Deterministic layout: user and destination SBS at the origin, EDC p at its
// mean distance r_p on its own bearing, relay SBSs evenly spaced so the
// minimum-hop chain has exactly ceil(r_p / r_mmw) hops.
SampledTopology mean_distance_topology(const NetworkScenario& s, int b);

// Region radius used for typical-point estimates: >= 5 / sqrt(lambda).
double typical_region_radius(double lambda);

McEstimate estimate_kth_nearest(double lambda, int k, std::uint64_t trials,
                                std::uint64_t seed, int jobs = 1);
std::vector<double> sample_kth_nearest(double lambda, int k,
                                       std::uint64_t trials, std::uint64_t seed,
                                       int jobs = 1);

McEstimate estimate_uplink_success(const NetworkScenario& s,
                                   std::uint64_t trials, std::uint64_t seed,
                                   int jobs = 1);
McEstimate estimate_deli_success(const NetworkScenario& s, std::uint64_t trials,
                                 std::uint64_t seed, int jobs = 1);
McEstimate estimate_access_success(const NetworkScenario& s,
                                   std::uint64_t trials, std::uint64_t seed,
                                   int jobs = 1);

McEstimate estimate_shadowing_success(double margin_db, double sigma_db,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int jobs = 1);
McEstimate estimate_shadowing_success(const NetworkScenario& s,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int jobs = 1);

enum class BackhaulMode { mcr, single_path };

struct BackhaulSimOptions {
  BackhaulMode mode = BackhaulMode::mcr;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int jobs = 1;
  // One JSON object per line per trial when set.
  std::ostream* trace = nullptr;
};

struct BackhaulSimResult {
  McEstimate delay;
  std::uint64_t discarded = 0;
};

// Stop-and-wait slotted relaying over a fixed topology. Throws
// Error(infeasible) when fewer than B EDCs have a relay chain to the
// destination.
BackhaulSimResult simulate_backhaul(const NetworkScenario& s,
                                    const SampledTopology& topology,
                                    const BackhaulSimOptions& options);

// Same, drawing a fresh PPP topology for every trial; trials whose chains are
// disconnected are discarded and counted.
BackhaulSimResult simulate_backhaul_sampled(const NetworkScenario& s,
                                            const BackhaulSimOptions& options);

}  // namespace mcrsim
