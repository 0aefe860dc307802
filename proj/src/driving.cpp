#include "gdo/driving.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gdo/quadrature.hpp"

namespace gdo {

Complex drive_kernel(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                     double t) {
  const double gm = inv.g_minus(t);
  const double wi = inv.omega_I();
  const Complex coeff{std::sqrt(wi / (2.0 * gm)),
                      inv.g_zero(t) / std::sqrt(2.0 * wi * gm)};
  return -coeff * sched.G(t) + Complex{0.0, std::sqrt(gm / (2.0 * wi))} * sched.F(t);
}

DriveState::DriveState(InvariantCoefficients inv, DenseSolution beta_traj, Complex beta0)
    : inv_(std::move(inv)), beta_traj_(std::move(beta_traj)), beta0_(beta0) {
  // Prefix of the drive-phase integrand over the dense nodes.
  const std::size_t n = beta_traj_.nodes();
  phase_prefix_.assign(n, 0.0);
  auto integrand = [this](double t) {
    const Complex b = beta(t);
    const double gm = inv_.g_minus(t);
    return (b.real() * b.real() - b.imag() * b.imag()) * inv_.theta_rate(t) -
           std::sqrt(2.0 * inv_.omega_I() / gm) * inv_.schedule().G(t) * b.imag();
  };
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double panel =
        gk15_panel(integrand, beta_traj_.node_time(k), beta_traj_.node_time(k + 1));
    const double y = panel - comp;
    const double t_new = sum + y;
    comp = (t_new - sum) - y;
    sum = t_new;
    phase_prefix_[k + 1] = sum;
  }
}

Complex DriveState::kernel(double t) const {
  return drive_kernel(inv_, inv_.schedule(), t);
}

double DriveState::g1(double t) const {
  const Complex b = beta(t);
  const double gm = inv_.g_minus(t);
  const double wi = inv_.omega_I();
  return wi * b.real() * std::sqrt(2.0 * wi / gm) +
         wi * b.imag() * std::sqrt(2.0 * gm / wi) * inv_.g_zero(t) / gm;
}

double DriveState::g2(double t) const {
  const Complex b = beta(t);
  return inv_.omega_I() * b.imag() * std::sqrt(2.0 * inv_.g_minus(t) / inv_.omega_I());
}

double DriveState::g3(double t) const { return inv_.omega_I() * std::norm(beta(t)); }

double DriveState::phase_integral(double t) const {
  const double span = t_end() - t_begin();
  if (t < t_begin() - 1e-12 * span || t > t_end() + 1e-12 * span)
    throw std::domain_error("phase_integral: t outside window");
  const double h = span / static_cast<double>(beta_traj_.nodes() - 1);
  auto k = static_cast<std::size_t>(std::clamp(
      (t - t_begin()) / h, 0.0, static_cast<double>(beta_traj_.nodes() - 1)));
  auto integrand = [this](double u) {
    const Complex b = beta(u);
    const double gm = inv_.g_minus(u);
    return (b.real() * b.real() - b.imag() * b.imag()) * inv_.theta_rate(u) -
           std::sqrt(2.0 * inv_.omega_I() / gm) * inv_.schedule().G(u) * b.imag();
  };
  return phase_prefix_[k] + gauss_kronrod(integrand, beta_traj_.node_time(k), t, 1e-13);
}

double DriveState::beta_residual(int n_check) const {
  const std::size_t n = beta_traj_.nodes();
  const double h = (t_end() - t_begin()) / static_cast<double>(n - 1);
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const std::size_t k =
        3 + static_cast<std::size_t>((static_cast<double>(n - 7) * i) / (n_check - 1));
    auto node = [&](std::ptrdiff_t off, std::size_t comp) {
      return beta_traj_.node_value(
          static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off), comp);
    };
    Complex db;
    for (std::size_t comp = 0; comp < 2; ++comp) {
      const double d = (-node(-3, comp) + 9 * node(-2, comp) - 45 * node(-1, comp) +
                        45 * node(1, comp) - 9 * node(2, comp) + node(3, comp)) /
                       (60.0 * h);
      if (comp == 0)
        db += d;
      else
        db += Complex{0.0, d};
    }
    const double t = beta_traj_.node_time(k);
    const Complex b{node(0, 0), node(0, 1)};
    const Complex res = db + Complex{0.0, inv_.theta_rate(t)} * b + kernel(t);
    worst = std::max(worst, std::abs(res) / (1.0 + std::abs(b)));
  }
  return worst;
}

double DriveState::quadrature_deviation(int n_check) const {
  // beta(t) = e^{-i Theta(t)} (beta0 - integral_{t0}^{t} W e^{i Theta}); the
  // oscillatory quadrature is accumulated panel-by-panel between check points.
  double worst = 0.0;
  Complex acc{0.0};
  double t_prev = t_begin();
  for (int i = 1; i <= n_check; ++i) {
    const double t = t_begin() + (t_end() - t_begin()) * i / n_check;
    acc += gauss_kronrod(
        [this](double u) {
          return kernel(u) * std::exp(Complex{0.0, inv_.theta(u)});
        },
        t_prev, t, 1e-12);
    const Complex via_quadrature =
        std::exp(Complex{0.0, -inv_.theta(t)}) * (beta0_ - acc);
    worst = std::max(worst, std::abs(via_quadrature - beta(t)));
    t_prev = t;
  }
  return worst;
}

DriveState solve_beta(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                      Complex beta0) {
  OdeRhs rhs = [&inv, &sched](double t, std::span<const double> y, std::span<double> dy) {
    const Complex b{y[0], y[1]};
    const Complex db = -Complex{0.0, inv.theta_rate(t)} * b - drive_kernel(inv, sched, t);
    dy[0] = db.real();
    dy[1] = db.imag();
  };
  const double y0[2] = {beta0.real(), beta0.imag()};
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  opts.n_dense = inv.basis().trajectory().nodes() - 1;
  DenseSolution traj = integrate_ode(rhs, y0, inv.t_begin(), inv.t_end(), opts);
  return {inv, std::move(traj), beta0};
}

Complex comoving_beta0(const InvariantCoefficients& inv, const ParameterSchedule& sched) {
  const double t0 = inv.t_begin();
  return Complex{0.0, 1.0} * drive_kernel(inv, sched, t0) / inv.theta_rate(t0);
}

double check_linear_odes(const DriveState& ds, const InvariantCoefficients& inv,
                         const ParameterSchedule& sched, int n_check) {
  const double t0 = inv.t_begin(), t1 = inv.t_end();
  OdeRhs rhs = [&inv, &sched](double t, std::span<const double> g, std::span<double> dg) {
    const double m = sched.M(t), y = sched.Y(t), w2 = sched.omega_sq(t);
    const double f = sched.F(t), gg = sched.G(t);
    dg[0] = -y * g[0] + m * w2 * g[1] + (gg * inv.g_plus(t) - f * inv.g_zero(t));
    dg[1] = -g[0] / m + y * g[1] - (f * inv.g_minus(t) - gg * inv.g_zero(t));
    dg[2] = gg * g[0] - f * g[1];
  };
  const double g0[3] = {ds.g1(t0), ds.g2(t0), ds.g3(t0)};
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  DenseSolution ode = integrate_ode(rhs, g0, t0, t1, opts);

  // Per-component scales.  A component may vanish identically (g2 for a real
  // beta), so each sup is floored by the natural magnitude the closed forms
  // allow at this displacement amplitude.
  double sup[3] = {0.0, 0.0, 0.0};
  double beta_sup = 0.0, f1 = 0.0, f2 = 0.0;
  const double wi = inv.omega_I();
  for (int i = 0; i < n_check; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_check - 1);
    sup[0] = std::max(sup[0], std::abs(ds.g1(t)));
    sup[1] = std::max(sup[1], std::abs(ds.g2(t)));
    sup[2] = std::max(sup[2], std::abs(ds.g3(t)));
    beta_sup = std::max(beta_sup, std::abs(ds.beta(t)));
    const double gm = inv.g_minus(t);
    f1 = std::max(f1, std::sqrt(2.0 * wi / gm) * (1.0 + std::abs(inv.g_zero(t)) / wi));
    f2 = std::max(f2, std::sqrt(2.0 * gm / wi));
  }
  const double floor[3] = {wi * beta_sup * f1, wi * beta_sup * f2, wi * beta_sup * beta_sup};
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_check - 1);
    const double closed[3] = {ds.g1(t), ds.g2(t), ds.g3(t)};
    for (int c = 0; c < 3; ++c) {
      const double dev = std::abs(ode.value(t, static_cast<std::size_t>(c)) - closed[c]);
      const double denom = std::max(sup[c], floor[c]);
      worst = std::max(worst, denom > 0.0 ? dev / denom : dev);
    }
  }
  return worst;
}

void dump_csv(const DriveState& ds, const std::string& path, int n_rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  out << "t,re_beta,im_beta,g1,g2,g3\n";
  char buf[200];
  for (int i = 0; i < n_rows; ++i) {
    const double t = ds.t_begin() + (ds.t_end() - ds.t_begin()) * i / (n_rows - 1);
    const Complex b = ds.beta(t);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, b.real(),
                  b.imag(), ds.g1(t), ds.g2(t), ds.g3(t));
    out << buf;
  }
}

}  // namespace gdo
