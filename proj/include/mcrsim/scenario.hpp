#pragma once

namespace mcrsim {

// All model parameters in strict SI: metres, seconds, Watts, Hz, linear
// ratios. Densities are nodes per square metre. Only the config layer knows
// about km^-2, dBm, dB or MB.
struct NetworkScenario {
  // Deployment densities (per m^2).
  double lambda_m = 5e-6;
  double lambda_s = 5e-5;
  double lambda_u = 2e-4;
  double lambda_e = 1e-5;

  // Transmit powers (W).
  double p_m = 19.952623149688797;  // 43 dBm
  double p_s = 1.0;
  double p_e = 1.0;
  double p_u = 0.19952623149688797;  // 23 dBm

  // Antenna counts.
  int nt_u = 2;
  int nr_m = 2;
  int nt_m = 2;
  int nr_e = 2;
  int nt_s = 2;
  int nr_u = 2;

  // Received-power thresholds (W) and the SINR threshold (linear).
  double theta1 = 1e-12;  // -90 dBm
  double theta2 = 1.0;    // 0 dB
  double theta3 = 1e-12;
  double theta4 = 1e-12;

  double alpha1 = 3.5;
  double alpha2 = 2.0;

  double n0 = 3.981071705534986e-21;  // -174 dBm/Hz, W/Hz
  double w_mmw = 200e6;
  double tau_mmw = 5e-6;
  double r_mmw = 100.0;
  double sigma_db = 5.0;

  double packet_l = 1024.0;         // bytes
  double buffer_omega = 1048576.0;  // bytes (1 MB = 2^20 B)

  double l_fiber = 1e6;
  double v_fiber = 2e8;

  double mu = 1.05e4;  // 1/s
  double chi = 5e7;    // m^2/s

  // Number of cooperating EDCs. When b_paths_auto is set, every EDC whose
  // mean distance is within r_max cooperates.
  int b_paths = 4;
  bool b_paths_auto = false;
  double r_max = 500.0;

  // Single-attempt transmission times: 1024 B at a nominal 100 Mbit/s.
  double t_ul_req = 8.192e-5;
  double t_dl_deli = 8.192e-5;
  double t_dl_as = 8.192e-5;

  double d_max = 20e-3;

  // SBS count per EDC coverage is 1 + relay_factor * lambda_s / lambda_e.
  double relay_factor = 1.28;

  // Throws Error(invariant) naming the first violated constraint.
  void validate() const;
};

// Zipf library and the per-EDC cache size.
struct ContentPlan {
  double beta = 0.8;
  int k_total = 500;
  int psi = 144;

  void validate() const;
};

}  // namespace mcrsim
