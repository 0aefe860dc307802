#pragma once

#include <array>
#include <string>
#include <vector>

#include "gdo/classical.hpp"
#include "gdo/defs.hpp"
#include "gdo/schedule.hpp"

namespace gdo {

// Quadratic-invariant coefficients of the undriven problem, built from the
// classical basis:
//   g_-  = c1 f1^2 + c2 f1 f2 + c3 f2^2
//   g_0  = -M (c1 f1 f1' + (c2/2)(f1' f2 + f1 f2') + c3 f2 f2') + M Y g_-
//   g_+  = M^2 (c1 f1'^2 + c2 f1' f2' + c3 f2'^2) - M^2 Y^2 g_- + 2 M Y g_0
// with the constant invariant frequency omega_I^2 = g_+ g_- - g_0^2 evaluated
// at t0, and the phase Theta(t) = integral_{t0}^{t} omega_I / (M g_-).
class InvariantCoefficients {
 public:
  InvariantCoefficients(ClassicalBasis basis, std::array<double, 3> c);

  double g_minus(double t) const;
  double g_zero(double t) const;
  double g_plus(double t) const;
  double omega_I() const { return omega_I_; }

  // Theta(t0) = 0; strictly increasing.  Composite Gauss-Kronrod over the
  // dense node grid plus one closing panel per call.
  double theta(double t) const;
  // d Theta / dt = omega_I / (M g_-), the instantaneous invariant frequency.
  double theta_rate(double t) const;

  double t_begin() const { return basis_.t_begin(); }
  double t_end() const { return basis_.t_end(); }
  std::array<double, 3> c_constants() const { return c_; }
  const ClassicalBasis& basis() const { return basis_; }
  const ParameterSchedule& schedule() const { return basis_.schedule(); }

  // Max over a check grid of |g_+ g_- - g_0^2 - omega_I^2| / omega_I^2.
  double max_invariant_deviation(int n_check = 512) const;

 private:
  ClassicalBasis basis_;
  std::array<double, 3> c_;
  double omega_I_ = 0.0;
  std::vector<double> theta_prefix_;  // Theta at the dense node times
};

InvariantCoefficients build_invariant(const ClassicalBasis& basis,
                                      const ParameterSchedule& sched,
                                      std::array<double, 3> c);
InvariantCoefficients build_invariant(const ClassicalBasis& basis,
                                      const ParameterSchedule& sched);

// Integrates the first-order system
//   g_-' = 2 g_- Y - 2 g_0 / M
//   g_0' = M w^2 g_- - g_+ / M
//   g_+' = -2 g_+ Y + 2 M w^2 g_0
// from the closed-form values at t0 and returns the max deviation from the
// closed forms over the window, each component scaled by its sup norm
// (absolute when a component vanishes identically).
double check_invariant_odes(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                            int n_check = 512);

// Debug dump: t, g_-, g_0, g_+, Theta.
void dump_csv(const InvariantCoefficients& inv, const std::string& path, int n_rows = 512);

}  // namespace gdo
