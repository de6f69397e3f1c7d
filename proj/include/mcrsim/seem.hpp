#pragma once

#include <string>
#include <vector>

#include "mcrsim/energy.hpp"
#include "mcrsim/error.hpp"
#include "mcrsim/popularity.hpp"
#include "mcrsim/scenario.hpp"

namespace mcrsim {

// Also known as SEEO: per cache size, find the EDC density that just meets the
// reduced delay budget, then pick the cheapest such pair.

struct FeasiblePair {
  int psi = 0;
  double lambda_e_crit = 0.0;  // per m^2
  double residual = 0.0;       // |backhaul + fiber term - budget| (s)
  bool at_lower_bound = false;  // constraint slack over the whole bracket
  double e_sys = 0.0;           // J/m^2
};

struct SkippedPsi {
  int psi = 0;
  std::string reason;
};

struct SeemOutcome {
  double budget = 0.0;
  FeasiblePair best;
  double e_sys_min = 0.0;
  std::vector<FeasiblePair> feasible_set;
  std::vector<SkippedPsi> skipped;
};

struct SeemOptions {
  // Number of cooperating EDCs; 0 uses the scenario value. 1 gives the
  // single-path baseline.
  int b_paths = 0;
  int jobs = 1;
  double root_tol = 1e-12;  // seconds on the residual, per-km^2 on density
};

// D_max minus the uplink request, control delivery and access delays.
double reduced_delay_budget(const NetworkScenario& s);

enum class CriticalStatus { found, fiber_exceeds_budget };

struct CriticalDensity {
  CriticalStatus status = CriticalStatus::found;
  double lambda_e = 0.0;
  double residual = 0.0;
  bool at_lower_bound = false;
};

// Solves backhaul(lambda_e) + fiber term(psi) = budget over
// [lambda_m, lambda_s]. Throws Error(infeasible) when the bracket is
// exhausted without a sign change.
CriticalDensity critical_edc_density(const NetworkScenario& s,
                                     const PopularityModel& popularity, int psi,
                                     double budget, const SeemOptions& options = {});

// Throws Error(infeasible) carrying the budget when no pair is feasible.
SeemOutcome seem_optimize(const NetworkScenario& s, const EnergyModel& em,
                          const ContentPlan& content,
                          const SeemOptions& options = {});

}  // namespace mcrsim

namespace mcrsim {

// Raised by seem_optimize when no cache size admits a feasible density.
class NoFeasiblePair : public Error {
 public:
  explicit NoFeasiblePair(double budget);
  double budget() const noexcept { return budget_; }

 private:
  double budget_;
};

}  // namespace mcrsim
