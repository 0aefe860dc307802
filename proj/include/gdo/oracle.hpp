#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gdo/defs.hpp"
#include "gdo/schedule.hpp"

namespace gdo {

// Independent verification propagator.  This module deliberately knows
// nothing about the invariant construction: it consumes only a schedule and
// state samples, so agreement with the closed-form states is evidence.

struct PropagationResult {
  std::vector<double> grid;
  std::vector<Complex> psi_final;
  double t0 = 0.0, t1 = 0.0;
  double dt = 0.0;          // actual step used (requested dt rounded to fit)
  double fidelity = -1.0;   // |<psi_ref|psi_num>|, -1 when no reference given
  double norm_drift = 0.0;  // | ||psi(t1)||^2 / ||psi(t0)||^2 - 1 |
};

// Crank-Nicolson propagation of psi0 from t0 to t1 with midpoint-time
// coefficients and a tridiagonal solve per step:
//   (1 + i dt/2 H(t+dt/2)) psi_new = (1 - i dt/2 H(t+dt/2)) psi_old.
// Discretization: 3-point kinetic stencil, symmetrized -(iY/2)(q D1 + D1 q)
// cross term, diagonal potential, centered i G D1; Dirichlet boundaries with
// amplitude watchdogs.  Throws when the initial state touches the boundary
// (|psi| >= 1e-10), when boundary amplitude exceeds 1e-6 during the run, or
// when the norm drifts by more than 1e-4.
PropagationResult propagate(const ParameterSchedule& sched, std::span<const double> grid,
                            std::span<const Complex> psi0, double t0, double t1, double dt,
                            std::span<const Complex> psi_reference = {});

// Max Hermiticity defect of the assembled tridiagonal H at time t:
// max(|H_{i,i+1} - conj(H_{i+1,i})|, |Im H_{i,i}|).
double hermiticity_defect(const ParameterSchedule& sched, std::span<const double> grid,
                          double t);

// Normalized overlap modulus |<a|b>| / (||a|| ||b||) on a uniform grid.
double overlap_fidelity(std::span<const Complex> a, std::span<const Complex> b, double h);

using StateProvider = std::function<std::vector<Complex>(double t)>;

struct SweepRow {
  double t = 0.0;
  double dt = 0.0;
  double fidelity = 0.0;
  double norm_drift = 0.0;
};

// Fidelity of the propagated state against the provided reference state for
// every (t, dt) pair; demonstrates the second-order step-size convergence.
std::vector<SweepRow> fidelity_sweep(const ParameterSchedule& sched,
                                     const StateProvider& reference,
                                     std::span<const double> grid, double t0,
                                     std::span<const double> times,
                                     std::span<const double> dt_list);

// || i d psi/dt - H_T psi ||_2 / || psi ||_2 at time t, with the time
// derivative from Richardson-extrapolated central differences of the provided
// states and H_T applied by 4th-order differences.
double schrodinger_residual(const ParameterSchedule& sched, std::span<const double> grid,
                            const StateProvider& state, double t, double delta_t);

void dump_sweep_csv(std::span<const SweepRow> rows, const std::string& path);
void dump_snapshot_csv(std::span<const double> grid, std::span<const Complex> psi,
                       const std::string& path);

}  // namespace gdo
