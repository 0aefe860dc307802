#include "gdo/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gdo/fdops.hpp"

namespace gdo {

namespace {

struct Tridiagonal {
  std::vector<Complex> lower, diag, upper;  // lower[0] and upper[n-1] unused
};

// H at time t on the given grid; see the header for the discretization.
Tridiagonal assemble(const ParameterSchedule& sched, std::span<const double> grid, double t,
                     double h) {
  const std::size_t n = grid.size();
  const double m = sched.M(t);
  if (!(m > 0.0)) throw std::runtime_error("propagate: M <= 0 inside window");
  const double y = sched.Y(t), w2 = sched.omega_sq(t), f = sched.F(t), g = sched.G(t);
  Tridiagonal a{std::vector<Complex>(n), std::vector<Complex>(n), std::vector<Complex>(n)};
  const double kin_off = -1.0 / (2.0 * m * h * h);
  const double kin_diag = 1.0 / (m * h * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = grid[i];
    a.diag[i] = kin_diag + 0.5 * m * w2 * q * q - f * q;
    if (i + 1 < n) {
      // -(iY/2)(q D1 + D1 q): row i, col i+1 picks (q_i + q_{i+1})/(2h).
      a.upper[i] = kin_off + Complex{0.0, -(0.5 * y) * (q + grid[i + 1]) / (2.0 * h)} +
                   Complex{0.0, g / (2.0 * h)};
    }
    if (i > 0) {
      a.lower[i] = kin_off + Complex{0.0, (0.5 * y) * (q + grid[i - 1]) / (2.0 * h)} +
                   Complex{0.0, -g / (2.0 * h)};
    }
  }
  return a;
}

// Thomas solve of (diag, lower, upper) x = rhs; the CN matrices are strongly
// diagonally dominant, so no pivoting.
void solve_tridiagonal(const std::vector<Complex>& lower, std::vector<Complex> diag,
                       const std::vector<Complex>& upper, std::vector<Complex>& x) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Complex w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    x[i] -= w * x[i - 1];
  }
  x[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper[i] * x[i + 1]) / diag[i];
}

}  // namespace

double hermiticity_defect(const ParameterSchedule& sched, std::span<const double> grid,
                          double t) {
  const double h = grid_spacing(grid);
  const Tridiagonal a = assemble(sched, grid, t, h);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(a.diag[i].imag()));
    if (i + 1 < grid.size())
      worst = std::max(worst, std::abs(a.upper[i] - std::conj(a.lower[i + 1])));
  }
  return worst;
}

double overlap_fidelity(std::span<const Complex> a, std::span<const Complex> b, double h) {
  const double na = norm_sq(a, h), nb = norm_sq(b, h);
  return std::abs(inner_product(a, b, h)) / std::sqrt(na * nb);
}

PropagationResult propagate(const ParameterSchedule& sched, std::span<const double> grid,
                            std::span<const Complex> psi0, double t0, double t1, double dt,
                            std::span<const Complex> psi_reference) {
  if (grid.size() != psi0.size())
    throw std::invalid_argument("propagate: grid and psi0 sizes differ");
  if (!(t1 > t0)) throw std::invalid_argument("propagate: t1 must exceed t0");
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  const double h = grid_spacing(grid);
  if (std::max(std::abs(psi0.front()), std::abs(psi0.back())) >= 1e-10)
    throw std::invalid_argument("propagate: initial state does not vanish at the boundary");

  const auto n_steps = static_cast<std::size_t>(std::lround(std::ceil((t1 - t0) / dt - 1e-12)));
  const double step = (t1 - t0) / static_cast<double>(n_steps);

  PropagationResult res;
  res.grid.assign(grid.begin(), grid.end());
  res.t0 = t0;
  res.t1 = t1;
  res.dt = step;

  std::vector<Complex> psi(psi0.begin(), psi0.end());
  const double norm0 = norm_sq(psi, h);
  if (!(norm0 > 0.0)) throw std::invalid_argument("propagate: zero initial state");

  const std::size_t n = grid.size();
  std::vector<Complex> rhs(n);
  const Complex half_idt{0.0, 0.5 * step};
  std::vector<Complex> a_lower(n), a_diag(n), a_upper(n);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_mid = t0 + (static_cast<double>(k) + 0.5) * step;
    const Tridiagonal ham = assemble(sched, grid, t_mid, h);

    // rhs = (1 - i dt/2 H) psi
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = psi[i] - half_idt * (ham.diag[i] * psi[i]);
      if (i > 0) acc -= half_idt * (ham.lower[i] * psi[i - 1]);
      if (i + 1 < n) acc -= half_idt * (ham.upper[i] * psi[i + 1]);
      rhs[i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
      a_diag[i] = 1.0 + half_idt * ham.diag[i];
      a_lower[i] = half_idt * ham.lower[i];
      a_upper[i] = half_idt * ham.upper[i];
    }
    solve_tridiagonal(a_lower, a_diag, a_upper, rhs);
    psi.swap(rhs);

    if (std::max(std::abs(psi.front()), std::abs(psi.back())) > 1e-6)
      throw std::runtime_error("propagate: boundary amplitude exceeded 1e-6 at t=" +
                               std::to_string(t_mid));
    const double drift = std::abs(norm_sq(psi, h) / norm0 - 1.0);
    if (drift > 1e-4)
      throw std::runtime_error("propagate: instability detected (norm drift " +
                               std::to_string(drift) + ")");
  }

  res.norm_drift = std::abs(norm_sq(psi, h) / norm0 - 1.0);
  if (!psi_reference.empty()) {
    if (psi_reference.size() != n)
      throw std::invalid_argument("propagate: reference state size mismatch");
    res.fidelity = overlap_fidelity(psi_reference, psi, h);
  }
  res.psi_final = std::move(psi);
  return res;
}

std::vector<SweepRow> fidelity_sweep(const ParameterSchedule& sched,
                                     const StateProvider& reference,
                                     std::span<const double> grid, double t0,
                                     std::span<const double> times,
                                     std::span<const double> dt_list) {
  std::vector<SweepRow> rows;
  const std::vector<Complex> psi0 = reference(t0);
  for (double t : times) {
    const std::vector<Complex> ref = reference(t);
    for (double dt : dt_list) {
      PropagationResult r = propagate(sched, grid, psi0, t0, t, dt, ref);
      rows.push_back({t, r.dt, r.fidelity, r.norm_drift});
    }
  }
  return rows;
}

double schrodinger_residual(const ParameterSchedule& sched, std::span<const double> grid,
                            const StateProvider& state, double t, double delta_t) {
  const std::vector<Complex> psi = state(t);
  if (psi.size() != grid.size())
    throw std::invalid_argument("schrodinger_residual: state size mismatch");

  auto central = [&](double d) {
    const std::vector<Complex> plus = state(t + d);
    const std::vector<Complex> minus = state(t - d);
    std::vector<Complex> out(psi.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (plus[i] - minus[i]) / (2.0 * d);
    return out;
  };
  const auto d_full = central(delta_t);
  const auto d_half = central(0.5 * delta_t);

  const auto h_psi = apply_hamiltonian(sched, grid, psi, t);
  const Complex im{0.0, 1.0};
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Complex dpsi_dt = (4.0 * d_half[i] - d_full[i]) / 3.0;
    num += std::norm(im * dpsi_dt - h_psi[i]);
    den += std::norm(psi[i]);
  }
  return std::sqrt(num / den);
}

void dump_sweep_csv(std::span<const SweepRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_sweep_csv: cannot open " + path);
  out << "t,dt,fidelity,norm_drift\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.t, r.dt, r.fidelity,
                  r.norm_drift);
    out << buf;
  }
}

void dump_snapshot_csv(std::span<const double> grid, std::span<const Complex> psi,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_snapshot_csv: cannot open " + path);
  out << "q,re_psi,im_psi\n";
  char buf[120];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid[i], psi[i].real(),
                  psi[i].imag());
    out << buf;
  }
}

}  // namespace gdo
