#include "mcrsim/route.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mcrsim/error.hpp"
#include "mcrsim/numerics.hpp"

namespace mcrsim {

double mean_kth_edc_distance(double lambda_e, int p) {
  if (!(lambda_e > 0.0)) throw Error(ErrorCode::argument, "EDC density must be > 0");
  if (p < 1) throw Error(ErrorCode::argument, "neighbour rank must be >= 1");
  // (2p-1)!! / (Gamma(p) 2^p sqrt(lambda)) written as a running product so
  // large p cannot overflow.
  double r = 0.5 / std::sqrt(lambda_e);
  for (int i = 2; i <= p; ++i) r *= (2.0 * i - 1.0) / (2.0 * i - 2.0);
  return r;
}

double relay_selection_prob(double lambda_s, double lambda_e, double relay_factor) {
  if (!(lambda_s > 0.0) || !(lambda_e > 0.0))
    throw Error(ErrorCode::argument, "densities must be > 0");
  return 1.0 / (1.0 + relay_factor * lambda_s / lambda_e);
}

double relay_selection_prob(const NetworkScenario& s) {
  return relay_selection_prob(s.lambda_s, s.lambda_e, s.relay_factor);
}

// All dB terms are referenced to 1 mW, the unit the deployment tables use.
double mmwave_link_margin(const NetworkScenario& s, double tx_power) {
  return numerics::watts_to_dbm(tx_power) - numerics::watts_to_dbm(s.theta4) -
         numerics::watts_to_dbm(s.n0 * s.w_mmw) - 70.0 - 20.0 * std::log10(s.r_mmw);
}

double mmwave_link_margin(const NetworkScenario& s) { return mmwave_link_margin(s, s.p_s); }

double shadowing_success_prob(double margin_db, double sigma_db) {
  if (!(sigma_db > 0.0)) throw Error(ErrorCode::argument, "sigma must be > 0");
  return 0.5 * (1.0 + numerics::erf_fn(margin_db / (std::numbers::sqrt2 * sigma_db)));
}

double mmwave_success_prob(const NetworkScenario& s) {
  return shadowing_success_prob(mmwave_link_margin(s), s.sigma_db);
}

double buffer_packets(const NetworkScenario& s) {
  return std::ceil(s.buffer_omega / s.packet_l);
}

int cooperative_paths(const NetworkScenario& s) {
  if (!s.b_paths_auto) return s.b_paths;
  int b = 0;
  while (mean_kth_edc_distance(s.lambda_e, b + 1) <= s.r_max) ++b;
  return b;
}

McrPlan make_plan(const NetworkScenario& s, int b, HopMode mode) {
  if (b < 1) {
    throw Error(ErrorCode::infeasible, "no EDC lies within r_max of the destination");
  }
  McrPlan plan;
  plan.b = b;
  double inv_sum = 0.0;
  for (int i = 1; i <= b; ++i) {
    const double r = mean_kth_edc_distance(s.lambda_e, i);
    if (r > s.r_max) {
      std::ostringstream msg;
      msg << "EDC " << i << " mean distance " << r << " m exceeds r_max " << s.r_max << " m";
      throw Error(ErrorCode::infeasible, msg.str());
    }
    plan.r.push_back(r);
    inv_sum += 1.0 / r;
  }
  for (const double r : plan.r) {
    plan.shares.push_back((1.0 / r) / inv_sum);
    const double ratio = r / s.r_mmw;
    plan.hops.push_back(mode == HopMode::exact_ceil ? std::ceil(ratio) : ratio);
  }
  plan.p1 = relay_selection_prob(s);
  plan.p2 = mmwave_success_prob(s);
  plan.p2_first = shadowing_success_prob(mmwave_link_margin(s, s.p_e), s.sigma_db);
  return plan;
}

namespace {

double packet_delay(const NetworkScenario& s, double hops, double p1, double p2_first,
                    double p2) {
  if (p2_first == p2) return hops * s.tau_mmw / (p1 * p2);
  return s.tau_mmw / p1 * (1.0 / p2_first + (hops - 1.0) / p2);
}

}  // namespace

double per_packet_path_delay(const NetworkScenario& s, double r_p, HopMode mode) {
  if (!(r_p > 0.0)) throw Error(ErrorCode::argument, "path length must be > 0");
  const double ratio = r_p / s.r_mmw;
  const double hops = mode == HopMode::exact_ceil ? std::ceil(ratio) : ratio;
  return packet_delay(s, hops, relay_selection_prob(s),
                      shadowing_success_prob(mmwave_link_margin(s, s.p_e), s.sigma_db),
                      mmwave_success_prob(s));
}

std::vector<double> per_path_system_delays(const NetworkScenario& s, const McrPlan& plan) {
  const double packets = buffer_packets(s);
  std::vector<double> delays;
  delays.reserve(plan.r.size());
  for (std::size_t p = 0; p < plan.r.size(); ++p) {
    delays.push_back(plan.shares[p] * packets *
                     packet_delay(s, plan.hops[p], plan.p1, plan.p2_first, plan.p2));
  }
  return delays;
}

double mcr_backhaul_delay(const NetworkScenario& s, int b, HopMode mode) {
  const McrPlan plan = make_plan(s, b, mode);
  const auto delays = per_path_system_delays(s, plan);
  return *std::max_element(delays.begin(), delays.end());
}

double mcr_backhaul_delay(const NetworkScenario& s, HopMode mode) {
  return mcr_backhaul_delay(s, cooperative_paths(s), mode);
}

double single_path_backhaul_delay(const NetworkScenario& s, HopMode mode) {
  return mcr_backhaul_delay(s, 1, mode);
}

DelayBounds delay_bounds(const NetworkScenario& s) {
  const int b = cooperative_paths(s);
  const double cap = s.lambda_e * std::numbers::pi * s.r_max * s.r_max;
  if (!(s.lambda_m < s.lambda_e && s.lambda_e < s.lambda_s)) {
    throw Error(ErrorCode::argument,
                "delay bounds need lambda_m < lambda_e < lambda_s");
  }
  if (!(b > 1 && b <= cap)) {
    std::ostringstream msg;
    msg << "delay bounds need 1 < B <= lambda_e*pi*r_max^2 (B=" << b << ", cap=" << cap
        << ")";
    throw Error(ErrorCode::argument, msg.str());
  }
  const double packets = buffer_packets(s);
  const double link = s.r_mmw * 2.0 * mmwave_success_prob(s);  // r_mmw (1 + erf(.))
  DelayBounds bounds;
  bounds.lower = (1.0 + s.relay_factor) * packets * s.tau_mmw /
                 (std::numbers::pi * s.r_max * s.r_max * std::pow(s.lambda_s, 1.5) * link);
  bounds.upper = packets * s.tau_mmw * (1.0 + s.relay_factor * s.lambda_s / s.lambda_m) /
                 (std::sqrt(s.lambda_m) * link);
  return bounds;
}

}  // namespace mcrsim
