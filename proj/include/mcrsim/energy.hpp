#pragma once

#include "mcrsim/scenario.hpp"

namespace mcrsim {

struct EnergyModel {
  double a_m = 21.45, b_m = 354.0;
  double a_s = 7.84, b_s = 71.0;
  double a_e = 7.84, b_e = 71.0;
  double t_life_m = 10 * 365 * 86400.0;  // s
  double t_life_s = 5 * 365 * 86400.0;
  double t_life_e = 5 * 365 * 86400.0;
  double e_em_m = 0.0;  // J
  double e_em_s = 0.0;
  double e_em_e = 0.0;
  double e_storage = 8e6;  // J per stored content

  void validate() const;
};

// Per-area lifecycle energy (J/m^2) split by tier.
struct SystemEnergy {
  double mbs = 0.0;
  double sbs = 0.0;
  double edc = 0.0;
  double storage = 0.0;
  double total = 0.0;
};

struct SeeResult {
  SystemEnergy e_sys;
  int qos = 0;
  double e_see = 0.0;
};

int qos_indicator(double d_total, double d_max);

SystemEnergy system_energy(const NetworkScenario& s, const EnergyModel& em,
                           int psi);

double service_effective_energy(double e_sys, int qos);

SeeResult evaluate_see(const NetworkScenario& s, const EnergyModel& em, int psi,
                       double d_total);

}  // namespace mcrsim
