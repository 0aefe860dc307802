#include "gdo/geometric.hpp"

#include <cmath>
#include <stdexcept>

#include "gdo/fdops.hpp"
#include "gdo/quadrature.hpp"
#include "gdo/wavefunction.hpp"

namespace gdo {

HCoefficients h_coefficients(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                             double t) {
  const double gm = inv.g_minus(t), g0 = inv.g_zero(t);
  const double m = sched.M(t), y = sched.Y(t), w2 = sched.omega_sq(t);
  const double wi = inv.omega_I();
  const double common = g0 * g0 + m * m * w2 * gm * gm;
  const double cross = 2.0 * m * y * g0 * gm;
  HCoefficients h;
  h.h0 = (common + wi * wi - cross) / (m * gm * wi);
  const double re = (common - wi * wi - cross) / (2.0 * m * gm * wi);
  const double im = (-2.0 * g0 * wi + 2.0 * m * y * gm * wi) / (2.0 * m * gm * wi);
  h.h_plus = {re, im};
  h.h_minus = {re, -im};
  return h;
}

Complex xi_term(const InvariantCoefficients& inv, const DriveState& ds,
                const ParameterSchedule& sched, double t) {
  const double gm = inv.g_minus(t);
  const Complex w = drive_kernel(inv, sched, t);
  return 2.0 * Complex{0.0, 1.0} *
         (std::conj(w) + std::sqrt(inv.omega_I() / (2.0 * gm)) * sched.G(t)) * ds.beta(t);
}

Complex zeta_term(const InvariantCoefficients& inv, const DriveState& ds,
                  const ParameterSchedule& sched, double t) {
  const Complex b = ds.beta(t);
  return (h_coefficients(inv, sched, t).h_minus + inv.theta_rate(t)) * b * b;
}

CyclicReport cis_conditions(const InvariantCoefficients& inv, const DriveState& ds,
                            const ParameterSchedule& sched, double tau, double t_start) {
  (void)ds;
  if (!(tau > 0.0)) throw std::invalid_argument("cis_conditions: tau must be positive");
  const double span = inv.t_end() - inv.t_begin();
  if (t_start < inv.t_begin() - 1e-12 * span ||
      t_start + 2.0 * tau > inv.t_end() + 1e-12 * span)
    throw std::invalid_argument(
        "cis_conditions: window must cover [t_start, t_start + 2 tau]");

  CyclicReport rep;
  rep.tau = tau;
  rep.t_start = t_start;
  rep.tol_theta = 1e-6 * 2.0 * M_PI;

  // Preconditions: the Hamiltonian itself and g_- must be tau-periodic.
  bool sched_periodic = true;
  {
    ParameterSchedule probe = sched;
    probe.period = tau;
    for (const auto& v : validate(probe, t_start, t_start + tau, 128, 1e-9)) {
      if (v.invariant.rfind("periodicity:", 0) == 0) {
        sched_periodic = false;
        break;
      }
    }
  }

  double sup_g = 0.0;
  for (int i = 0; i < 256; ++i)
    sup_g = std::max(sup_g, std::abs(inv.g_minus(t_start + 2.0 * tau * i / 255.0)));
  const auto per =
      check_periodicity(inv.basis(), tau, 1e-8 * sup_g, inv.c_constants(), 256);

  // theta0 and sigma0 are still reported for diagnostics.
  rep.theta0 = inv.theta(t_start + tau) - inv.theta(t_start);
  rep.winding = static_cast<int>(std::lround(rep.theta0 / (2.0 * M_PI)));

  double max_w = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double t = t_start + tau * i / 511.0;
    max_w = std::max(max_w, std::abs(drive_kernel(inv, sched, t)));
  }
  rep.tol_sigma = 1e-8 * tau * max_w;
  rep.sigma0 = gauss_kronrod(
      [&](double t) {
        return drive_kernel(inv, sched, t) * std::exp(Complex{0.0, inv.theta(t)});
      },
      t_start, t_start + tau, 1e-4 * rep.tol_sigma + 1e-15);

  if (!per.periodic) {
    rep.is_cis = false;
    rep.reason = "g_- not periodic";
    return rep;
  }
  if (!sched_periodic) {
    rep.is_cis = false;
    rep.reason = "schedule is not tau-periodic";
    return rep;
  }

  const bool theta_ok = std::abs(rep.theta0 - 2.0 * M_PI * rep.winding) <= rep.tol_theta;
  const bool sigma_ok = std::abs(rep.sigma0) <= rep.tol_sigma;
  rep.is_cis = theta_ok && sigma_ok;
  if (!theta_ok) rep.reason = "theta0 not an integer multiple of 2 pi";
  else if (!sigma_ok) rep.reason = "sigma0 != 0";
  return rep;
}

namespace {

// <psi_n| H_T |psi_n> from grid moments, one audited operator implementation
// shared with the Schroedinger-residual check.
double hamiltonian_expectation(int n, const InvariantCoefficients& inv, const DriveState& ds,
                               const ParameterSchedule& sched, double t) {
  auto grid = make_grid(inv, ds, t, 2048, level_span_sigmas(n, 10.0));
  WaveFunctionSample s = eval_psi(n, inv, ds, sched, t, std::move(grid));
  const double h = grid_spacing(s.grid);
  const auto hpsi = apply_hamiltonian(sched, s.grid, s.psi, t);
  const Complex expectation = inner_product(s.psi, hpsi, h);
  return expectation.real() / norm_sq(s.psi, h);
}

}  // namespace

BerryPhaseResult berry_phase(int n, const InvariantCoefficients& inv, const DriveState& ds,
                             const ParameterSchedule& sched, double tau, double t_start) {
  const CyclicReport rep = cis_conditions(inv, ds, sched, tau, t_start);
  if (!rep.is_cis)
    throw std::invalid_argument("berry_phase: not a cyclic configuration (" +
                                (rep.reason.empty() ? std::string("conditions fail") : rep.reason) +
                                ")");

  const double a = t_start, b = t_start + tau;
  BerryPhaseResult r;

  const double level_integral = gauss_kronrod(
      [&](double t) {
        const double g0 = inv.g_zero(t);
        return g0 * g0 / (sched.M(t) * inv.g_minus(t) * inv.omega_I()) -
               sched.Y(t) * g0 / inv.omega_I();
      },
      a, b, 1e-12);
  r.integral_h0_beta_sq = gauss_kronrod(
      [&](double t) {
        return 0.5 * h_coefficients(inv, sched, t).h0 * std::norm(ds.beta(t));
      },
      a, b, 1e-12);
  r.integral_xi =
      gauss_kronrod([&](double t) { return xi_term(inv, ds, sched, t).real(); }, a, b, 1e-12);
  r.integral_zeta =
      gauss_kronrod([&](double t) { return zeta_term(inv, ds, sched, t).real(); }, a, b, 1e-12);
  r.gamma_bp = (n + 0.5) * level_integral + r.integral_h0_beta_sq + r.integral_xi +
               r.integral_zeta;

  r.chi = alpha_phase(n, inv, ds, sched, b) - alpha_phase(n, inv, ds, sched, a);

  // Reconstruction route: Gamma = chi + int <H_T>.  The expectation value is
  // smooth and periodic; a composite Kronrod rule over 24 panels is ample.
  const int panels = 24;
  double h_int = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + tau * k / panels;
    const double hi = a + tau * (k + 1) / panels;
    h_int += gk15_panel(
        [&](double t) { return hamiltonian_expectation(n, inv, ds, sched, t); }, lo, hi);
  }
  r.gamma_reconstructed = r.chi + h_int;
  r.discrepancy = std::abs(r.gamma_bp - r.gamma_reconstructed) /
                  std::max({std::abs(r.gamma_bp), std::abs(r.gamma_reconstructed), 1.0});
  return r;
}

}  // namespace gdo
