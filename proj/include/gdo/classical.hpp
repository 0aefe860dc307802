#pragma once

#include <array>
#include <optional>

#include "gdo/defs.hpp"
#include "gdo/ode.hpp"
#include "gdo/schedule.hpp"

namespace gdo {

struct ClassicalInit {
  Complex f1, df1;
  Complex f2, df2;
};

// Two independent solutions of the classical equation of motion
//   M f'' + M' f' + (M w^2 - M Y^2 - M' Y - M Y') f = 0
// as dense interpolants, plus the mass-weighted Wronskian used as an
// integration-quality monitor.
class ClassicalBasis {
 public:
  ClassicalBasis(const ParameterSchedule& sched, DenseSolution traj, double tol);

  Complex f1(double t) const { return {traj_.value(t, 0), traj_.value(t, 1)}; }
  Complex df1(double t) const { return {traj_.value(t, 2), traj_.value(t, 3)}; }
  Complex f2(double t) const { return {traj_.value(t, 4), traj_.value(t, 5)}; }
  Complex df2(double t) const { return {traj_.value(t, 6), traj_.value(t, 7)}; }

  // M (f1 f2' - f1' f2); constant in t for exact solutions.
  Complex wronskian(double t) const;
  Complex wronskian_ref() const { return wronskian_ref_; }

  double t_begin() const { return traj_.t_begin(); }
  double t_end() const { return traj_.t_end(); }
  double tol() const { return tol_; }
  const ParameterSchedule& schedule() const { return sched_; }
  const DenseSolution& trajectory() const { return traj_; }

  // Max scaled pointwise residual of the equation of motion on an interior
  // check grid; f'' comes from a 6th-order difference of the stored f' nodes
  // so the check is independent of the integrator's own RHS values.
  double eom_residual(int n_check = 512) const;

  // Max relative deviation of the mass-weighted Wronskian from its t0 value.
  double wronskian_drift(int n_check = 512) const;

 private:
  ParameterSchedule sched_;
  DenseSolution traj_;
  double tol_;
  Complex wronskian_ref_;
};

// Integrates the equation of motion over [t_begin, t_end].  Without explicit
// initial data, f1(t0) = 1, f1'(t0) = -gamma0 + i Omega0 matched to the local
// constant-coefficient solution (Omega0^2 = K - gamma0^2, gamma0 = M'/2M, K
// the effective frequency term), and f2 takes the conjugate data, so
// constant-coefficient scenarios reproduce pure exponentials.
// tol must lie in [1e-13, 1e-6].
ClassicalBasis solve_classical(const ParameterSchedule& sched, double t_begin, double t_end,
                               double tol = 1e-10,
                               std::optional<ClassicalInit> init = std::nullopt,
                               std::size_t n_dense = 4096);

// c-constants giving g_-(t0) = 1/M(t0) with c1 = c3 = 0 (every stock example).
std::array<double, 3> default_c_constants(const ClassicalBasis& basis);

struct PeriodicityReport {
  bool periodic;
  double max_deviation;
};

// Whether g_-(t) = c1 f1^2 + c2 f1 f2 + c3 f2^2 is tau-periodic on a grid
// covering [t_begin, t_end - tau].  Requires a window of at least 2 tau.
PeriodicityReport check_periodicity(const ClassicalBasis& basis, double tau, double tol,
                                    std::optional<std::array<double, 3>> c = std::nullopt,
                                    int n_check = 512);

// Debug dump: t, Re f1, Im f1, Re f1', Im f1', Re f2, Im f2, Re f2', Im f2'.
void dump_csv(const ClassicalBasis& basis, const std::string& path, int n_rows = 512);

}  // namespace gdo
