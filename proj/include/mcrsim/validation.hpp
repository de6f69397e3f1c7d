#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcrsim/config.hpp"

namespace mcrsim {

// One analytic-vs-Monte-Carlo comparison.
struct OracleCheck {
  std::string name;
  double analytic = 0.0;
  double mc_mean = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  std::uint64_t n_samples = 0;
  // "3se" or "5pct"; the backhaul simulator is judged on relative error.
  std::string criterion = "3se";
  bool pass = false;
};

// z-score with the standard error floored at 1/n, so an estimator that never
// varies (probability exactly 0 or 1 in every trial) is judged at its
// resolution instead of dividing by zero.
double oracle_z(double analytic, double mc_mean, double std_error,
                std::uint64_t n);

std::vector<OracleCheck> run_validation(const SystemModel& model,
                                        std::uint64_t trials,
                                        std::uint64_t seed, int jobs = 1);

// Named scalar outputs for sweeps.
std::vector<std::string> quantity_names();
bool is_quantity(std::string_view name);
double evaluate_quantity(const SystemModel& model, std::string_view name);

}  // namespace mcrsim
