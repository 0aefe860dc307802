#pragma once

#include <span>
#include <vector>

#include "gdo/defs.hpp"
#include "gdo/driving.hpp"
#include "gdo/invariant.hpp"

namespace gdo {

// Physicists' Hermite polynomial by the three-term recurrence, 0 <= n <= 64.
double hermite(int n, double x);

inline constexpr int kMaxQuantumNumber = 64;

// Lewis-Riesenfeld phase with alpha_n(t0) = 0:
//   alpha_n(t) = -(n + 1/2) Theta(t)
//              + int_{t0}^{t} [ (beta_R^2 - beta_I^2) omega_I/(M g_-)
//                               - sqrt(2 omega_I/g_-) G beta_I ] dt'.
double alpha_phase(int n, const InvariantCoefficients& inv, const DriveState& ds,
                   const ParameterSchedule& sched, double t);

struct WaveFunctionSample {
  int n = 0;
  double t = 0.0;
  std::vector<double> grid;
  std::vector<Complex> psi;
  double alpha_n = 0.0;
  double delta_q = 0.0;  // sqrt(2 g_-/omega_I) beta_R
  double delta_p = 0.0;  // sqrt(2 omega_I/g_-) beta_I
};

// Uniform grid of n_points covering [-delta_q - span, -delta_q + span] with
// span = span_sigmas * sqrt(g_-/omega_I) at time t.
std::vector<double> make_grid(const InvariantCoefficients& inv, const DriveState& ds, double t,
                              std::size_t n_points = 2048, double span_sigmas = 8.0);

// Widens the grid span so the classical turning point of level n plus tail
// stays covered.
inline double level_span_sigmas(int n, double base = 8.0) {
  return std::max(base, std::sqrt((2.0 * n + 1.0) / 2.0) + 6.0);
}

// Exact Schroedinger wave function
//   psi_n(q,t) = e^{i alpha_n} (2^n n!)^{-1/2} (omega_I/(pi g_-))^{1/4}
//                exp(-i g_0/(2 g_-) q^2 - i delta_p q - omega_I/(2 g_-) (q+delta_q)^2)
//                H_n(sqrt(omega_I/g_-) (q + delta_q)).
// Rejects grids coarser than 16 points per packet width sqrt(g_-/omega_I).
WaveFunctionSample eval_psi(int n, const InvariantCoefficients& inv, const DriveState& ds,
                            const ParameterSchedule& sched, double t,
                            std::vector<double> grid);

// I_T phi with p = -i d/dq by 4th-order central differences,
//   I_T = g_- p^2/2 + g_0 (pq+qp)/2 + g_+ q^2/2 + g1 q + g2 p + g3.
std::vector<Complex> apply_invariant_operator(const InvariantCoefficients& inv,
                                              const DriveState& ds, double t,
                                              std::span<const double> grid,
                                              std::span<const Complex> phi);

// || I_T phi_n - omega_I (n + 1/2) phi_n ||_2 / || phi_n ||_2.
double eigen_residual(int n, const InvariantCoefficients& inv, const DriveState& ds,
                      const ParameterSchedule& sched, double t, std::span<const double> grid);

struct Moments {
  double mean_q = 0.0;
  double var_q = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
};

// Grid-recovered position and momentum moments (q by quadrature, p by
// 4th-order differences).  Requires a normalized sample.
Moments moments(const WaveFunctionSample& sample, const ParameterSchedule& sched,
                const InvariantCoefficients& inv);

// CSV columns q, re_psi, im_psi, abs2_psi; the header line carries n, t and a
// caller-supplied scenario id.
void dump_csv(const WaveFunctionSample& sample, const std::string& path,
              const std::string& scenario_id);

}  // namespace gdo
