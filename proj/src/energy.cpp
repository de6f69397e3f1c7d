#include "mcrsim/energy.hpp"

namespace mcrsim {

int qos_indicator(double d_total, double d_max) { return d_total <= d_max ? 1 : 0; }

SystemEnergy system_energy(const NetworkScenario& s, const EnergyModel& em, int psi) {
  SystemEnergy e;
  e.mbs = s.lambda_m * ((em.a_m * s.p_m + em.b_m) * em.t_life_m + em.e_em_m);
  e.sbs = s.lambda_s * ((em.a_s * s.p_s + em.b_s) * em.t_life_s + em.e_em_s);
  e.edc = s.lambda_e * ((em.a_e * s.p_e + em.b_e) * em.t_life_e + em.e_em_e);
  e.storage = s.lambda_e * static_cast<double>(psi) * em.e_storage;
  e.total = e.mbs + e.sbs + e.edc + e.storage;
  return e;
}

double service_effective_energy(double e_sys, int qos) { return e_sys * qos; }

SeeResult evaluate_see(const NetworkScenario& s, const EnergyModel& em, int psi,
                       double d_total) {
  SeeResult r;
  r.e_sys = system_energy(s, em, psi);
  r.qos = qos_indicator(d_total, s.d_max);
  r.e_see = service_effective_energy(r.e_sys.total, r.qos);
  return r;
}

}  // namespace mcrsim
