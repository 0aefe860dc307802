#pragma once

#include <string>
#include <vector>

#include "gdo/defs.hpp"
#include "gdo/invariant.hpp"
#include "gdo/ode.hpp"

namespace gdo {

// Source kernel of the displacement equation,
//   W = -(sqrt(omega_I/2g_-) + i g_0 / sqrt(2 omega_I g_-)) G + i sqrt(g_-/2 omega_I) F.
Complex drive_kernel(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                     double t);

// Displacement beta(t) solving beta' + i (omega_I/(M g_-)) beta = -W with
// beta(t0) = beta0, plus the linear invariant coefficients
//   g1 = omega_I beta_R sqrt(2 omega_I/g_-) + omega_I beta_I sqrt(2 g_-/omega_I) g_0/g_-
//   g2 = omega_I beta_I sqrt(2 g_-/omega_I)
//   g3 = omega_I |beta|^2
// and the accumulated drive phase used by the wave-function phase alpha_n.
class DriveState {
 public:
  DriveState(InvariantCoefficients inv, DenseSolution beta_traj, Complex beta0);

  Complex beta0() const { return beta0_; }
  Complex beta(double t) const { return {beta_traj_.value(t, 0), beta_traj_.value(t, 1)}; }
  Complex kernel(double t) const;  // W(t)

  double g1(double t) const;
  double g2(double t) const;
  double g3(double t) const;

  // integral_{t0}^{t} [ (beta_R^2 - beta_I^2) omega_I/(M g_-) - sqrt(2 omega_I/g_-) G beta_I ]
  double phase_integral(double t) const;

  const InvariantCoefficients& invariant() const { return inv_; }
  double t_begin() const { return beta_traj_.t_begin(); }
  double t_end() const { return beta_traj_.t_end(); }

  // Max pointwise residual |beta' + i Theta' beta + W| / (1 + |beta|), with
  // beta' from a 6th-order difference of the stored nodes.
  double beta_residual(int n_check = 512) const;

  // Max absolute deviation between the ODE solution and the quadrature form
  //   beta(t) = e^{-i Theta} (beta0 - integral W e^{i Theta}).
  double quadrature_deviation(int n_check = 64) const;

 private:
  InvariantCoefficients inv_;
  DenseSolution beta_traj_;
  Complex beta0_;
  std::vector<double> phase_prefix_;
};

DriveState solve_beta(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                      Complex beta0);

// The stationary point of the displacement equation at t0 (Example A's
// constant solution): beta = i W(t0) M(t0) g_-(t0) / omega_I.
Complex comoving_beta0(const InvariantCoefficients& inv, const ParameterSchedule& sched);

// Integrates
//   g1' = -Y g1 + M w^2 g2 + (G g_+ - F g_0)
//   g2' = -g1/M + Y g2 - (F g_- - G g_0)
//   g3' = G g1 - F g2
// from the closed-form values at t0 and returns the max deviation from the
// closed forms, per-component scaled by its sup norm (absolute when zero).
double check_linear_odes(const DriveState& ds, const InvariantCoefficients& inv,
                         const ParameterSchedule& sched, int n_check = 512);

// Debug dump: t, Re beta, Im beta, g1, g2, g3.
void dump_csv(const DriveState& ds, const std::string& path, int n_rows = 512);

}  // namespace gdo
