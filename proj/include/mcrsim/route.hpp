#pragma once

#include <vector>

#include "mcrsim/scenario.hpp"

namespace mcrsim {

// Hop count per path: r_p / r_mmw (continuous, the closed-form delay) or
// ceil(r_p / r_mmw) (exact-ceil, what a slotted relay chain actually does).
enum class HopMode { continuous, exact_ceil };

struct McrPlan {
  int b = 1;
  std::vector<double> r;       // mean EDC distances, ascending (m)
  std::vector<double> shares;  // inverse-distance data fractions
  std::vector<double> hops;
  double p1 = 1.0;
  double p2_first = 1.0;  // first hop, transmitted by the EDC
  double p2 = 1.0;        // SBS relay hops
};

// Mean distance to the p-th nearest EDC of a PPP with density lambda_e.
double mean_kth_edc_distance(double lambda_e, int p);

double relay_selection_prob(double lambda_s, double lambda_e,
                            double relay_factor = 1.28);
double relay_selection_prob(const NetworkScenario& s);

// mmWave link margin in dB for a transmitter of the given power (W).
double mmwave_link_margin(const NetworkScenario& s, double tx_power);
double mmwave_link_margin(const NetworkScenario& s);

// P(zeta <= margin) for zeta ~ N(0, sigma_db^2).
double shadowing_success_prob(double margin_db, double sigma_db);
double mmwave_success_prob(const NetworkScenario& s);

double buffer_packets(const NetworkScenario& s);

// Effective number of cooperating EDCs (resolves b_paths = auto).
int cooperative_paths(const NetworkScenario& s);

// Throws Error(infeasible) when some r_i exceeds r_max.
McrPlan make_plan(const NetworkScenario& s, int b, HopMode mode);

// Delay of one packet over a chain of mean length r_p.
double per_packet_path_delay(const NetworkScenario& s, double r_p, HopMode mode);

// D_p^w for every path of the plan.
std::vector<double> per_path_system_delays(const NetworkScenario& s,
                                           const McrPlan& plan);

// max_p D_p^w over the scenario's cooperating EDCs.
double mcr_backhaul_delay(const NetworkScenario& s,
                          HopMode mode = HopMode::continuous);
double mcr_backhaul_delay(const NetworkScenario& s, int b, HopMode mode);

double single_path_backhaul_delay(const NetworkScenario& s,
                                  HopMode mode = HopMode::continuous);

struct DelayBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Requires lambda_m < lambda_e < lambda_s and 1 < B <= lambda_e*pi*r_max^2.
DelayBounds delay_bounds(const NetworkScenario& s);

}  // namespace mcrsim
