#include "mcrsim/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "mcrsim/energy.hpp"
#include "mcrsim/error.hpp"

namespace mcrsim {

namespace {

void require(bool ok, const std::string& constraint) {
  if (!ok) throw Error(ErrorCode::invariant, "invariant violated: " + constraint);
}

}  // namespace

void NetworkScenario::validate() const {
  require(lambda_m > 0 && lambda_s > 0 && lambda_u > 0 && lambda_e > 0,
          "all densities > 0");
  require(lambda_m < lambda_e && lambda_e < lambda_s,
          "lambda_m < lambda_e < lambda_s");
  require(p_m > p_s && p_s > p_u, "p_m > p_s > p_u");
  require(p_e > 0 && p_u > 0, "transmit powers > 0");
  {
    std::ostringstream msg;
    msg << "mu > chi * lambda_u (M/M/1 stability: mu=" << mu
        << ", arrival rate=" << chi * lambda_u << ")";
    require(mu > chi * lambda_u, msg.str());
  }
  require(nt_u >= 1 && nr_m >= 1 && nt_m >= 1 && nr_e >= 1 && nt_s >= 1 &&
              nr_u >= 1,
          "antenna counts >= 1");
  require(alpha1 > 2 && alpha2 >= 2,
          "alpha1 > 2 and alpha2 >= 2");
  require(theta1 > 0 && theta2 > 0 && theta3 > 0 && theta4 > 0,
          "thresholds > 0");
  require(tau_mmw > 0 && r_mmw > 0 && packet_l > 0 && buffer_omega > 0,
          "tau_mmw, r_mmw, packet_l, buffer_omega > 0");
  require(n0 > 0 && w_mmw > 0, "n0, w_mmw > 0");
  require(sigma_db > 0, "sigma_db > 0");
  require(l_fiber >= 0 && v_fiber > 0, "l_fiber >= 0 and v_fiber > 0");
  require(r_max > 0, "r_max > 0");
  require(t_ul_req > 0 && t_dl_deli > 0 && t_dl_as > 0,
          "per-attempt transmission times > 0");
  require(d_max > 0, "d_max > 0");
  require(relay_factor >= 0, "relay_factor >= 0");
  if (!b_paths_auto) {
    const double cap = lambda_e * std::numbers::pi * r_max * r_max;
    std::ostringstream msg;
    msg << "1 <= b_paths <= lambda_e*pi*r_max^2 (b_paths=" << b_paths
        << ", cap=" << cap << ")";
    require(b_paths >= 1 && b_paths <= cap, msg.str());
  }
}

void ContentPlan::validate() const {
  require(beta >= 0, "beta >= 0");
  require(k_total >= 1, "k_total >= 1");
  require(psi >= 0 && psi <= k_total, "0 <= psi <= k_total");
}

void EnergyModel::validate() const {
  require(a_m >= 0 && b_m >= 0 && a_s >= 0 && b_s >= 0 && a_e >= 0 && b_e >= 0,
          "power-model coefficients >= 0");
  require(t_life_m > 0 && t_life_s > 0 && t_life_e > 0, "lifetimes > 0");
  require(e_em_m >= 0 && e_em_s >= 0 && e_em_e >= 0 && e_storage >= 0,
          "embodied and storage energies >= 0");
}

}  // namespace mcrsim
