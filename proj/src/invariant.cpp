#include "gdo/invariant.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gdo/ode.hpp"
#include "gdo/quadrature.hpp"

namespace gdo {

namespace {

// Real part with a reality guard; the quadratic forms must come out real for
// admissible c-constants.
double real_checked(Complex v, const char* what, double t) {
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw std::invalid_argument(std::string("build_invariant: ") + what +
                                " is not real at t=" + std::to_string(t) +
                                " (c1 and c3 must match for a conjugate-pair basis)");
  return v.real();
}

}  // namespace

InvariantCoefficients::InvariantCoefficients(ClassicalBasis basis, std::array<double, 3> c)
    : basis_(std::move(basis)), c_(c) {
  const double t0 = basis_.t_begin();

  // Enforce reality for the conjugate-pair default basis: c1 f1^2 + c3 f2^2
  // is real iff c1 = c3 when f2 = conj(f1).
  const Complex probe = basis_.f2(t0) - std::conj(basis_.f1(t0));
  const bool conjugate_pair = std::abs(probe) < 1e-12;
  if (conjugate_pair && std::abs(c_[0] - c_[2]) > 1e-14 * (1.0 + std::abs(c_[0])))
    throw std::invalid_argument(
        "build_invariant: conjugate-pair basis requires c1 == c3 for real coefficients");

  const double gm0 = g_minus(t0);
  if (!(gm0 > 0.0)) throw std::invalid_argument("build_invariant: g_-(t0) must be positive");
  const double wi2 = g_plus(t0) * gm0 - g_zero(t0) * g_zero(t0);
  if (!(wi2 > 0.0)) throw std::invalid_argument("build_invariant: omega_I^2 <= 0");
  omega_I_ = std::sqrt(wi2);

  // g_- must stay positive across the window (needed for sqrt(g_-)).
  const std::size_t n = basis_.trajectory().nodes();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = basis_.trajectory().node_time(k);
    if (!(g_minus(t) > 0.0))
      throw std::invalid_argument("build_invariant: g_- <= 0 at t=" + std::to_string(t));
  }

  // Theta prefix over the dense nodes (Kahan-compensated).
  theta_prefix_.assign(n, 0.0);
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = basis_.trajectory().node_time(k);
    const double b = basis_.trajectory().node_time(k + 1);
    const double panel = gk15_panel([this](double t) { return theta_rate(t); }, a, b);
    const double y = panel - comp;
    const double t_new = sum + y;
    comp = (t_new - sum) - y;
    sum = t_new;
    theta_prefix_[k + 1] = sum;
  }
}

double InvariantCoefficients::g_minus(double t) const {
  const Complex f1 = basis_.f1(t), f2 = basis_.f2(t);
  return real_checked(c_[0] * f1 * f1 + c_[1] * f1 * f2 + c_[2] * f2 * f2, "g_-", t);
}

double InvariantCoefficients::g_zero(double t) const {
  const Complex f1 = basis_.f1(t), f2 = basis_.f2(t);
  const Complex d1 = basis_.df1(t), d2 = basis_.df2(t);
  const double m = schedule().M(t);
  const Complex s = c_[0] * f1 * d1 + 0.5 * c_[1] * (d1 * f2 + f1 * d2) + c_[2] * f2 * d2;
  return real_checked(-m * s, "g_0", t) + m * schedule().Y(t) * g_minus(t);
}

double InvariantCoefficients::g_plus(double t) const {
  const Complex d1 = basis_.df1(t), d2 = basis_.df2(t);
  const double m = schedule().M(t);
  const double y = schedule().Y(t);
  const double quad =
      real_checked(c_[0] * d1 * d1 + c_[1] * d1 * d2 + c_[2] * d2 * d2, "g_+", t);
  return m * m * quad - m * m * y * y * g_minus(t) + 2.0 * m * y * g_zero(t);
}

double InvariantCoefficients::theta_rate(double t) const {
  return omega_I_ / (schedule().M(t) * g_minus(t));
}

double InvariantCoefficients::theta(double t) const {
  const auto& traj = basis_.trajectory();
  const double span = t_end() - t_begin();
  if (t < t_begin() - 1e-12 * span || t > t_end() + 1e-12 * span)
    throw std::domain_error("theta: t outside window");
  const double h = span / static_cast<double>(traj.nodes() - 1);
  auto k = static_cast<std::size_t>(
      std::clamp((t - t_begin()) / h, 0.0, static_cast<double>(traj.nodes() - 1)));
  const double t_node = traj.node_time(k);
  return theta_prefix_[k] + gauss_kronrod([this](double u) { return theta_rate(u); }, t_node,
                                          t, 1e-13);
}

double InvariantCoefficients::max_invariant_deviation(int n_check) const {
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double t = t_begin() + (t_end() - t_begin()) * i / (n_check - 1);
    const double wi2 = g_plus(t) * g_minus(t) - g_zero(t) * g_zero(t);
    worst = std::max(worst, std::abs(wi2 - omega_I_ * omega_I_) / (omega_I_ * omega_I_));
  }
  return worst;
}

InvariantCoefficients build_invariant(const ClassicalBasis& basis,
                                      const ParameterSchedule& sched,
                                      std::array<double, 3> c) {
  (void)sched;  // the basis carries the schedule; kept for signature symmetry
  return InvariantCoefficients(basis, c);
}

InvariantCoefficients build_invariant(const ClassicalBasis& basis,
                                      const ParameterSchedule& sched) {
  return build_invariant(basis, sched, default_c_constants(basis));
}

double check_invariant_odes(const InvariantCoefficients& inv, const ParameterSchedule& sched,
                            int n_check) {
  const double t0 = inv.t_begin(), t1 = inv.t_end();
  OdeRhs rhs = [&sched](double t, std::span<const double> g, std::span<double> dg) {
    const double m = sched.M(t), y = sched.Y(t), w2 = sched.omega_sq(t);
    dg[0] = 2.0 * g[0] * y - 2.0 * g[1] / m;
    dg[1] = m * w2 * g[0] - g[2] / m;
    dg[2] = -2.0 * g[2] * y + 2.0 * m * w2 * g[1];
  };
  const double g0[3] = {inv.g_minus(t0), inv.g_zero(t0), inv.g_plus(t0)};
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  DenseSolution ode = integrate_ode(rhs, g0, t0, t1, opts);

  // Component scales: sup |g_i| over the window; g_0 may vanish identically
  // (symmetric scenarios), so it gets the dimensionally matching floor
  // sqrt(sup g_- sup g_+) ~ max |g_0| compatible with omega_I.
  double sup[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < n_check; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_check - 1);
    sup[0] = std::max(sup[0], std::abs(inv.g_minus(t)));
    sup[1] = std::max(sup[1], std::abs(inv.g_zero(t)));
    sup[2] = std::max(sup[2], std::abs(inv.g_plus(t)));
  }
  sup[1] = std::max(sup[1], std::sqrt(sup[0] * sup[2]));
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double t = t0 + (t1 - t0) * i / (n_check - 1);
    const double closed[3] = {inv.g_minus(t), inv.g_zero(t), inv.g_plus(t)};
    for (int c = 0; c < 3; ++c) {
      const double dev = std::abs(ode.value(t, static_cast<std::size_t>(c)) - closed[c]);
      worst = std::max(worst, sup[c] > 0.0 ? dev / sup[c] : dev);
    }
  }
  return worst;
}

void dump_csv(const InvariantCoefficients& inv, const std::string& path, int n_rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  out << "t,g_minus,g_zero,g_plus,theta\n";
  char buf[160];
  for (int i = 0; i < n_rows; ++i) {
    const double t = inv.t_begin() + (inv.t_end() - inv.t_begin()) * i / (n_rows - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, inv.g_minus(t),
                  inv.g_zero(t), inv.g_plus(t), inv.theta(t));
    out << buf;
  }
}

}  // namespace gdo
