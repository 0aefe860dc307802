#include "gdo/classical.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gdo {

namespace {

// Effective restoring coefficient K(t) = w^2 - Y^2 - (M'/M) Y - Y'.
double restoring(const ParameterSchedule& s, double t) {
  const double m = s.M(t);
  return s.omega_sq(t) - s.Y(t) * s.Y(t) - (s.M.deriv(t) / m) * s.Y(t) - s.Y.deriv(t);
}

}  // namespace

ClassicalBasis::ClassicalBasis(const ParameterSchedule& sched, DenseSolution traj, double tol)
    : sched_(sched), traj_(std::move(traj)), tol_(tol) {
  wronskian_ref_ = wronskian(traj_.t_begin());
  if (!(std::abs(wronskian_ref_) > 0.0))
    throw std::invalid_argument("solve_classical: initial data is linearly dependent");
}

Complex ClassicalBasis::wronskian(double t) const {
  return sched_.M(t) * (f1(t) * df2(t) - df1(t) * f2(t));
}

double ClassicalBasis::wronskian_drift(int n_check) const {
  const double a = t_begin(), b = t_end();
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double t = a + (b - a) * i / (n_check - 1);
    worst = std::max(worst, std::abs(wronskian(t) - wronskian_ref_) / std::abs(wronskian_ref_));
  }
  return worst;
}

double ClassicalBasis::eom_residual(int n_check) const {
  // f'' at node k from the 6th-order centered difference of the stored f'
  // node values: (-g[k-3] + 9 g[k-2] - 45 g[k-1] + 45 g[k+1] - 9 g[k+2] + g[k+3]) / 60h.
  const std::size_t n = traj_.nodes();
  const double h = (t_end() - t_begin()) / static_cast<double>(n - 1);
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const std::size_t k =
        3 + static_cast<std::size_t>((static_cast<double>(n - 7) * i) / (n_check - 1));
    const double t = traj_.node_time(k);
    const double m = sched_.M(t), dm = sched_.M.deriv(t), kk = restoring(sched_, t);
    for (int comp : {0, 4}) {  // f1 and f2 blocks
      for (int part = 0; part < 2; ++part) {
        auto df = [&](std::ptrdiff_t off) {
          const auto idx = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
          return traj_.node_value(idx, static_cast<std::size_t>(comp + 2 + part));
        };
        const double ddf = (-df(-3) + 9 * df(-2) - 45 * df(-1) + 45 * df(1) - 9 * df(2) +
                            df(3)) /
                           (60.0 * h);
        const double f = traj_.node_value(k, static_cast<std::size_t>(comp + part));
        const double dfv = traj_.node_value(k, static_cast<std::size_t>(comp + 2 + part));
        const double res = m * ddf + dm * dfv + m * kk * f;
        const double scale =
            std::abs(m * ddf) + std::abs(dm * dfv) + std::abs(m * kk * f) + 1e-300;
        worst = std::max(worst, std::abs(res) / scale);
      }
    }
  }
  return worst;
}

ClassicalBasis solve_classical(const ParameterSchedule& sched, double t_begin, double t_end,
                               double tol, std::optional<ClassicalInit> init,
                               std::size_t n_dense) {
  if (!(t_end > t_begin)) throw std::invalid_argument("solve_classical: empty window");
  if (!(tol >= 1e-13 && tol <= 1e-6))
    throw std::invalid_argument("solve_classical: tol must lie in [1e-13, 1e-6]");
  if (!(sched.M(t_begin) > 0.0))
    throw std::invalid_argument("solve_classical: M(t0) must be positive");

  ClassicalInit data;
  if (init) {
    data = *init;
  } else {
    // Locally WKB-matched conjugate pair.
    const double m = sched.M(t_begin);
    const double gamma0 = 0.5 * sched.M.deriv(t_begin) / m;
    const double disc = restoring(sched, t_begin) - gamma0 * gamma0;
    if (!(disc > 0.0))
      throw std::invalid_argument(
          "solve_classical: locally overdamped at t0; supply explicit initial data");
    const double omega0 = std::sqrt(disc);
    data = {Complex{1.0, 0.0}, Complex{-gamma0, omega0}, Complex{1.0, 0.0},
            Complex{-gamma0, -omega0}};
  }

  // State: (Re f1, Im f1, Re f1', Im f1', Re f2, Im f2, Re f2', Im f2').
  OdeRhs rhs = [&sched](double t, std::span<const double> y, std::span<double> dy) {
    const double m = sched.M(t);
    if (!(m > 0.0)) throw std::runtime_error("solve_classical: M <= 0 inside window");
    const double a = sched.M.deriv(t) / m;
    const double kk = restoring(sched, t);
    for (int b = 0; b < 8; b += 4) {
      dy[b + 0] = y[b + 2];
      dy[b + 1] = y[b + 3];
      dy[b + 2] = -a * y[b + 2] - kk * y[b + 0];
      dy[b + 3] = -a * y[b + 3] - kk * y[b + 1];
    }
  };

  const double y0[8] = {data.f1.real(), data.f1.imag(), data.df1.real(), data.df1.imag(),
                        data.f2.real(), data.f2.imag(), data.df2.real(), data.df2.imag()};
  OdeOptions opts;
  opts.rtol = tol;
  opts.atol = tol;
  opts.n_dense = n_dense;
  DenseSolution traj = integrate_ode(rhs, y0, t_begin, t_end, opts);
  return {sched, std::move(traj), tol};
}

std::array<double, 3> default_c_constants(const ClassicalBasis& basis) {
  const double t0 = basis.t_begin();
  const Complex prod = basis.f1(t0) * basis.f2(t0);
  if (!(std::abs(prod.real()) > 0.0) || std::abs(prod.imag()) > 1e-12 * std::abs(prod.real()))
    throw std::invalid_argument("default_c_constants: f1 f2 at t0 must be real and nonzero");
  return {0.0, 1.0 / (basis.schedule().M(t0) * prod.real()), 0.0};
}

PeriodicityReport check_periodicity(const ClassicalBasis& basis, double tau, double tol,
                                    std::optional<std::array<double, 3>> c, int n_check) {
  if (!(tau > 0)) throw std::invalid_argument("check_periodicity: tau must be positive");
  if (basis.t_end() - basis.t_begin() < 2.0 * tau)
    throw std::invalid_argument("check_periodicity: window must cover at least 2 tau");
  const std::array<double, 3> cc = c ? *c : default_c_constants(basis);
  auto g_minus = [&](double t) {
    const Complex v = cc[0] * basis.f1(t) * basis.f1(t) + cc[1] * basis.f1(t) * basis.f2(t) +
                      cc[2] * basis.f2(t) * basis.f2(t);
    return v.real();
  };
  const double a = basis.t_begin();
  const double b = basis.t_end() - tau;
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double t = a + (b - a) * i / (n_check - 1);
    worst = std::max(worst, std::abs(g_minus(t + tau) - g_minus(t)));
  }
  return {worst <= tol, worst};
}

void dump_csv(const ClassicalBasis& basis, const std::string& path, int n_rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  out << "t,re_f1,im_f1,re_df1,im_df1,re_f2,im_f2,re_df2,im_df2\n";
  char buf[256];
  for (int i = 0; i < n_rows; ++i) {
    const double t =
        basis.t_begin() + (basis.t_end() - basis.t_begin()) * i / (n_rows - 1);
    const Complex a = basis.f1(t), b = basis.df1(t), c = basis.f2(t), d = basis.df2(t);
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, a.real(),
                  a.imag(), b.real(), b.imag(), c.real(), c.imag(), d.real(), d.imag());
    out << buf;
  }
}

}  // namespace gdo
