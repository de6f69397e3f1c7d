#include "mcrsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mcrsim/energy.hpp"
#include "mcrsim/error.hpp"
#include "mcrsim/latency.hpp"
#include "mcrsim/montecarlo.hpp"
#include "mcrsim/numerics.hpp"
#include "mcrsim/popularity.hpp"
#include "mcrsim/route.hpp"
#include "mcrsim/seem.hpp"

namespace mcrsim {

double oracle_z(double analytic, double mc_mean, double std_error, std::uint64_t n) {
  const double floor = n > 0 ? 1.0 / static_cast<double>(n) : 1.0;
  return (mc_mean - analytic) / std::max(std_error, floor);
}

namespace {

OracleCheck sigma_check(std::string name, double analytic, const McEstimate& mc) {
  OracleCheck c;
  c.name = std::move(name);
  c.analytic = analytic;
  c.mc_mean = mc.mean;
  c.std_error = mc.std_error;
  c.n_samples = mc.n_samples;
  c.z = oracle_z(analytic, mc.mean, mc.std_error, mc.n_samples);
  c.criterion = "3se";
  c.pass = std::abs(c.z) <= 3.0;
  return c;
}

OracleCheck relative_check(std::string name, double analytic, const McEstimate& mc) {
  OracleCheck c = sigma_check(std::move(name), analytic, mc);
  c.criterion = "5pct";
  c.pass = std::abs(mc.mean - analytic) <= 0.05 * std::abs(analytic);
  return c;
}

std::string label(const char* base, const std::string& point) {
  return std::string(base) + "[" + point + "]";
}

struct Variant {
  std::string tag;
  std::function<void(NetworkScenario&)> apply;
};

NetworkScenario with(const NetworkScenario& base, const Variant& v) {
  NetworkScenario s = base;
  v.apply(s);
  return s;
}

}  // namespace

std::vector<OracleCheck> run_validation(const SystemModel& model, std::uint64_t trials,
                                        std::uint64_t seed, int jobs) {
  if (trials < 1) throw Error(ErrorCode::argument, "trials must be >= 1");
  const NetworkScenario& base = model.network;
  std::vector<OracleCheck> checks;
  std::uint64_t stream = 0;
  // Every comparison gets its own seed so adding a check never shifts others.
  const auto next_seed = [&] { return seed + 0x9E3779B97F4A7C15ull * ++stream; };
  using numerics::dbm_to_watts;

  for (int p = 1; p <= 5; ++p) {
    const McEstimate mc = estimate_kth_nearest(base.lambda_e, p, trials, next_seed(), jobs);
    checks.push_back(sigma_check(label("edc_distance", "p=" + std::to_string(p)),
                                 mean_kth_edc_distance(base.lambda_e, p), mc));
  }

  const std::vector<Variant> uplink = {
      {"base", [](NetworkScenario&) {}},
      {"theta1=-70dBm", [&](NetworkScenario& s) { s.theta1 = dbm_to_watts(-70); }},
      {"theta1=-63dBm", [&](NetworkScenario& s) { s.theta1 = dbm_to_watts(-63); }},
      {"theta1=-60dBm,n=1", [&](NetworkScenario& s) {
         s.theta1 = dbm_to_watts(-60);
         s.nt_u = s.nr_m = 1;
       }},
      {"theta1=-65dBm,n=1", [&](NetworkScenario& s) {
         s.theta1 = dbm_to_watts(-65);
         s.nt_u = s.nr_m = 1;
       }},
      {"theta1=-60dBm,nt=4,nr=1", [&](NetworkScenario& s) {
         s.theta1 = dbm_to_watts(-60);
         s.nt_u = 4;
         s.nr_m = 1;
       }},
  };
  for (const auto& v : uplink) {
    const NetworkScenario s = with(base, v);
    checks.push_back(sigma_check(label("rho_ul", v.tag), uplink_success_prob(s),
                                 estimate_uplink_success(s, trials, next_seed(), jobs)));
  }

  const std::vector<Variant> deli = {
      {"base", [](NetworkScenario&) {}},
      {"theta2=0dB,n=1", [](NetworkScenario& s) { s.nt_m = s.nr_e = 1; }},
      {"theta2=-10dB,n=1", [](NetworkScenario& s) {
         s.nt_m = s.nr_e = 1;
         s.theta2 = 0.1;
       }},
      {"theta2=5dB,n=2", [](NetworkScenario& s) {
         s.nt_m = 2;
         s.nr_e = 1;
         s.theta2 = numerics::db_to_linear(5);
       }},
      {"theta2=10dB", [](NetworkScenario& s) { s.theta2 = 10.0; }},
      {"alpha1=4", [](NetworkScenario& s) { s.alpha1 = 4.0; }},
  };
  for (const auto& v : deli) {
    const NetworkScenario s = with(base, v);
    checks.push_back(sigma_check(label("rho_deli", v.tag), deli_success_prob(s),
                                 estimate_deli_success(s, trials, next_seed(), jobs)));
  }

  const std::vector<Variant> access = {
      {"base", [](NetworkScenario&) {}},
      {"theta3=-20dBm", [&](NetworkScenario& s) { s.theta3 = dbm_to_watts(-20); }},
      {"theta3=-12dBm", [&](NetworkScenario& s) { s.theta3 = dbm_to_watts(-12); }},
      {"theta3=-8dBm", [&](NetworkScenario& s) { s.theta3 = dbm_to_watts(-8); }},
      {"theta3=-15dBm,n=1", [&](NetworkScenario& s) {
         s.theta3 = dbm_to_watts(-15);
         s.nt_s = s.nr_u = 1;
       }},
      {"theta3=-30dBm,alpha2=3", [&](NetworkScenario& s) {
         s.theta3 = dbm_to_watts(-30);
         s.alpha2 = 3.0;
       }},
  };
  for (const auto& v : access) {
    const NetworkScenario s = with(base, v);
    checks.push_back(sigma_check(label("rho_as", v.tag), access_success_prob(s),
                                 estimate_access_success(s, trials, next_seed(), jobs)));
  }

  const std::vector<Variant> shadow = {
      {"base", [](NetworkScenario&) {}},
      {"theta4=10dBm", [&](NetworkScenario& s) { s.theta4 = dbm_to_watts(10); }},
      {"theta4=5dBm", [&](NetworkScenario& s) { s.theta4 = dbm_to_watts(5); }},
      {"theta4=15dBm,sigma=3", [&](NetworkScenario& s) {
         s.theta4 = dbm_to_watts(15);
         s.sigma_db = 3.0;
       }},
      {"theta4=0dBm,sigma=8", [&](NetworkScenario& s) {
         s.theta4 = dbm_to_watts(0);
         s.sigma_db = 8.0;
       }},
  };
  for (const auto& v : shadow) {
    const NetworkScenario s = with(base, v);
    checks.push_back(sigma_check(label("p2", v.tag), mmwave_success_prob(s),
                                 estimate_shadowing_success(s, trials, next_seed(), jobs)));
  }

  // The packet simulator costs about 10^5 draws per trial; it is judged on
  // relative error, so a few hundred trials suffice.
  const std::uint64_t bh_trials = std::clamp<std::uint64_t>(trials / 2000, 50, 2000);
  for (const int b : {1, 2, 4}) {
    NetworkScenario s = base;
    s.b_paths_auto = false;
    s.b_paths = b;
    if (mean_kth_edc_distance(s.lambda_e, b) > s.r_max) continue;
    BackhaulSimOptions opt;
    opt.mode = b == 1 ? BackhaulMode::single_path : BackhaulMode::mcr;
    opt.trials = bh_trials;
    opt.seed = next_seed();
    opt.jobs = jobs;
    const auto sim = simulate_backhaul(s, mean_distance_topology(s, b), opt);
    checks.push_back(relative_check(label("d_bh_exact", "B=" + std::to_string(b)),
                                    mcr_backhaul_delay(s, b, HopMode::exact_ceil), sim.delay));
  }
  return checks;
}

namespace {

using Quantity = std::function<double(const SystemModel&)>;

double crit_density(const SystemModel& m, int b) {
  const PopularityModel pop = zipf(m.content.beta, m.content.k_total);
  SeemOptions opt;
  opt.b_paths = b;
  const CriticalDensity c =
      critical_edc_density(m.network, pop, m.content.psi, reduced_delay_budget(m.network), opt);
  if (c.status == CriticalStatus::fiber_exceeds_budget)
    throw Error(ErrorCode::infeasible, "fiber term exceeds the reduced budget");
  return c.lambda_e;
}

double crit_energy(const SystemModel& m, int b) {
  NetworkScenario s = m.network;
  s.lambda_e = crit_density(m, b);
  return system_energy(s, m.energy, m.content.psi).total;
}

double p_hit(const SystemModel& m) {
  return hit_probability(zipf(m.content.beta, m.content.k_total), m.content.psi);
}

double d_total(const SystemModel& m) {
  return total_latency(m.network, p_hit(m), mcr_backhaul_delay(m.network)).total;
}

const std::vector<std::pair<std::string, Quantity>>& registry() {
  static const std::vector<std::pair<std::string, Quantity>> table = {
      {"p_hit", p_hit},
      {"fiber_delay", [](const SystemModel& m) { return fiber_delay(m.network); }},
      {"fiber_term",
       [](const SystemModel& m) { return fiber_delay(m.network) * (1.0 - p_hit(m)); }},
      {"rho_ul", [](const SystemModel& m) { return uplink_success_prob(m.network); }},
      {"rho_deli", [](const SystemModel& m) { return deli_success_prob(m.network); }},
      {"rho_as", [](const SystemModel& m) { return access_success_prob(m.network); }},
      {"d_ul_req", [](const SystemModel& m) { return uplink_request_delay(m.network); }},
      {"d_dl_deli", [](const SystemModel& m) { return deli_delay(m.network); }},
      {"d_dl_as", [](const SystemModel& m) { return access_delay(m.network); }},
      {"p1", [](const SystemModel& m) { return relay_selection_prob(m.network); }},
      {"p2", [](const SystemModel& m) { return mmwave_success_prob(m.network); }},
      {"link_margin_db", [](const SystemModel& m) { return mmwave_link_margin(m.network); }},
      {"d_bh_mcr", [](const SystemModel& m) { return mcr_backhaul_delay(m.network); }},
      {"d_bh_single",
       [](const SystemModel& m) { return single_path_backhaul_delay(m.network); }},
      {"d_bh_mcr_exact",
       [](const SystemModel& m) { return mcr_backhaul_delay(m.network, HopMode::exact_ceil); }},
      {"bound_lower", [](const SystemModel& m) { return delay_bounds(m.network).lower; }},
      {"bound_upper", [](const SystemModel& m) { return delay_bounds(m.network).upper; }},
      {"d_total", d_total},
      {"e_sys",
       [](const SystemModel& m) {
         return system_energy(m.network, m.energy, m.content.psi).total;
       }},
      {"qos",
       [](const SystemModel& m) {
         return static_cast<double>(qos_indicator(d_total(m), m.network.d_max));
       }},
      {"see",
       [](const SystemModel& m) {
         return evaluate_see(m.network, m.energy, m.content.psi, d_total(m)).e_see;
       }},
      {"budget", [](const SystemModel& m) { return reduced_delay_budget(m.network); }},
      {"lambda_e_crit_mcr",
       [](const SystemModel& m) { return crit_density(m, cooperative_paths(m.network)); }},
      {"lambda_e_crit_single", [](const SystemModel& m) { return crit_density(m, 1); }},
      {"see_crit_mcr",
       [](const SystemModel& m) { return crit_energy(m, cooperative_paths(m.network)); }},
      {"see_crit_single", [](const SystemModel& m) { return crit_energy(m, 1); }},
  };
  return table;
}

}  // namespace

std::vector<std::string> quantity_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

bool is_quantity(std::string_view name) {
  for (const auto& entry : registry())
    if (entry.first == name) return true;
  return false;
}

double evaluate_quantity(const SystemModel& model, std::string_view name) {
  for (const auto& [key, fn] : registry())
    if (key == name) return fn(model);
  throw Error(ErrorCode::argument, "unknown quantity '" + std::string(name) + "'");
}

}  // namespace mcrsim
