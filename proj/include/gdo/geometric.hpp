#pragma once

#include <string>
#include <vector>

#include "gdo/defs.hpp"
#include "gdo/driving.hpp"
#include "gdo/invariant.hpp"

namespace gdo {

// Coefficients of the quadratic form of H_T on invariant ladder operators:
//   h0 = [g_0^2 + M^2 w^2 g_-^2 + omega_I^2 - 2 M Y g_0 g_-] / (M g_- omega_I)
//   h+- = [g_0^2 + M^2 w^2 g_-^2 - omega_I^2 -+ 2i g_0 omega_I
//          - 2 M Y g_0 g_- +- 2i M Y g_- omega_I] / (2 M g_- omega_I)
struct HCoefficients {
  double h0 = 0.0;
  Complex h_plus;
  Complex h_minus;
};

HCoefficients h_coefficients(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                             double t);

// Coherent-shift integrands of the Berry phase:
//   xi   = 2i (W* + sqrt(omega_I/(2 g_-)) G) beta
//   zeta = (h_- + omega_I/(M g_-)) beta^2
Complex xi_term(const InvariantCoefficients& inv, const DriveState& ds,
                const ParameterSchedule& sched, double t);
Complex zeta_term(const InvariantCoefficients& inv, const DriveState& ds,
                  const ParameterSchedule& sched, double t);

struct CyclicReport {
  double tau = 0.0;
  double t_start = 0.0;
  double theta0 = 0.0;   // int_{t}^{t+tau} omega_I / (M g_-)
  Complex sigma0;        // int_{t}^{t+tau} W e^{i Theta}
  bool is_cis = false;
  int winding = 0;       // round(theta0 / 2 pi)
  std::string reason;    // set when the verdict was forced false
  double tol_theta = 0.0;
  double tol_sigma = 0.0;

  struct PerN {
    int n = 0;
    double chi = 0.0;
    double gamma_bp = 0.0;
    double gamma_reconstructed = 0.0;
    double discrepancy = 0.0;
  };
  std::vector<PerN> per_n;
};

// Cyclic-initial-state test over [t_start, t_start + tau].  The basis window
// must cover [t_start, t_start + 2 tau] so the schedule and g_- periodicity
// preconditions can be checked; failed preconditions force is_cis = false
// with a reason instead of throwing.
CyclicReport cis_conditions(const InvariantCoefficients& inv, const DriveState& ds,
                            const ParameterSchedule& sched, double tau, double t_start);

struct BerryPhaseResult {
  double gamma_bp = 0.0;             // quadrature of the closed-form expression
  double chi = 0.0;                  // total phase alpha_n(t+tau) - alpha_n(t)
  double gamma_reconstructed = 0.0;  // chi + int <psi_n|H_T|psi_n>
  double discrepancy = 0.0;          // relative two-route disagreement
  double integral_h0_beta_sq = 0.0;  // int (h0/2) |beta|^2
  double integral_xi = 0.0;          // int Re xi
  double integral_zeta = 0.0;        // int Re zeta
};

// Nonadiabatic Berry phase of level n over one period,
//   Gamma_n = (n + 1/2) int [ g_0^2/(M g_- omega_I) - Y g_0 / omega_I ]
//           + int [ (h0/2) |beta|^2 + Re xi + Re zeta ],
// cross-checked against chi_n + int <H_T> with grid-moment expectation values.
// Throws std::invalid_argument when (tau, t_start) is not a CIS configuration.
BerryPhaseResult berry_phase(int n, const InvariantCoefficients& inv, const DriveState& ds,
                             const ParameterSchedule& sched, double tau, double t_start);

}  // namespace gdo
