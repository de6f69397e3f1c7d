#include "mcrsim/seem.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "mcrsim/latency.hpp"
#include "mcrsim/numerics.hpp"
#include "mcrsim/route.hpp"
#include "parallel.hpp"

namespace mcrsim {

namespace {

std::string budget_message(double budget) {
  std::ostringstream msg;
  msg << "no feasible (psi, lambda_e) pair: reduced delay budget is " << budget << " s";
  return msg.str();
}

}  // namespace

NoFeasiblePair::NoFeasiblePair(double budget)
    : Error(ErrorCode::infeasible, budget_message(budget)), budget_(budget) {}

double reduced_delay_budget(const NetworkScenario& s) {
  return s.d_max - uplink_request_delay(s) - deli_delay(s) - access_delay(s);
}

CriticalDensity critical_edc_density(const NetworkScenario& s,
                                     const PopularityModel& popularity, int psi,
                                     double budget, const SeemOptions& options) {
  if (psi < 1 || psi > popularity.k_total)
    throw Error(ErrorCode::argument, "psi must lie in [1, k_total]");
  CriticalDensity out;
  const double fiber_term = fiber_delay(s) * (1.0 - hit_probability(popularity, psi));
  if (fiber_term > budget) {
    out.status = CriticalStatus::fiber_exceeds_budget;
    return out;
  }

  // Work in per-km^2 so the bracket and tolerance are O(1) numbers.
  const auto residual = [&](double density_km2) {
    NetworkScenario at = s;
    at.lambda_e = density_km2 / 1e6;
    const int b = options.b_paths > 0 ? options.b_paths : cooperative_paths(at);
    double backhaul = std::numeric_limits<double>::infinity();
    try {
      backhaul = mcr_backhaul_delay(at, b, HopMode::continuous);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::infeasible) throw;
    }
    return backhaul + fiber_term - budget;
  };

  const double lo_bound = s.lambda_m * 1e6;
  const double hi_bound = s.lambda_s * 1e6;
  if (residual(lo_bound) <= 0.0) {
    out.lambda_e = s.lambda_m;
    out.at_lower_bound = true;
    return out;
  }
  // Expand geometrically from the lower bound until the constraint is met.
  double lo = lo_bound;
  double hi = std::min(2.0 * lo, hi_bound);
  while (residual(hi) > 0.0) {
    if (hi >= hi_bound) {
      std::ostringstream msg;
      msg << "psi=" << psi << ": backhaul plus fiber term exceeds the budget over the "
          << "whole search range lambda_e in [" << lo_bound << ", " << hi_bound
          << "] per km^2";
      throw Error(ErrorCode::infeasible, msg.str());
    }
    lo = hi;
    hi = std::min(2.0 * hi, hi_bound);
  }
  const double root = numerics::find_root_monotone(residual, lo, hi, options.root_tol);
  out.lambda_e = root / 1e6;
  out.residual = std::abs(residual(root));
  return out;
}

SeemOutcome seem_optimize(const NetworkScenario& s, const EnergyModel& em,
                          const ContentPlan& content, const SeemOptions& options) {
  const PopularityModel popularity = zipf(content.beta, content.k_total);
  SeemOutcome outcome;
  outcome.budget = reduced_delay_budget(s);

  struct Slot {
    std::optional<FeasiblePair> pair;
    std::string skip_reason;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(content.k_total));

  // Step 1: critical density for every cache size.
  detail::parallel_for(slots.size(), options.jobs, [&](std::size_t i) {
    const int psi = static_cast<int>(i) + 1;
    try {
      const CriticalDensity crit =
          critical_edc_density(s, popularity, psi, outcome.budget, options);
      if (crit.status == CriticalStatus::fiber_exceeds_budget) {
        slots[i].skip_reason = "fiber term exceeds the reduced budget";
        return;
      }
      NetworkScenario at = s;
      at.lambda_e = crit.lambda_e;
      FeasiblePair pair;
      pair.psi = psi;
      pair.lambda_e_crit = crit.lambda_e;
      pair.residual = crit.residual;
      pair.at_lower_bound = crit.at_lower_bound;
      pair.e_sys = system_energy(at, em, psi).total;
      slots[i].pair = pair;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::infeasible) throw;
      slots[i].skip_reason = e.what();
    }
  });

  // Step 2: cheapest feasible pair. Scanning in psi order with a strict
  // comparison sends ties to the smaller psi.
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].pair) {
      outcome.feasible_set.push_back(*slots[i].pair);
    } else {
      outcome.skipped.push_back({static_cast<int>(i) + 1, slots[i].skip_reason});
    }
  }
  if (outcome.feasible_set.empty()) throw NoFeasiblePair(outcome.budget);
  outcome.best = outcome.feasible_set.front();
  for (const auto& pair : outcome.feasible_set) {
    if (pair.e_sys < outcome.best.e_sys) outcome.best = pair;
  }
  outcome.e_sys_min = outcome.best.e_sys;
  return outcome;
}

}  // namespace mcrsim
