#include "gdo/wavefunction.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gdo/fdops.hpp"

namespace gdo {

double hermite(int n, double x) {
  if (n < 0 || n > kMaxQuantumNumber)
    throw std::invalid_argument("hermite: n must lie in [0, 64]");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double alpha_phase(int n, const InvariantCoefficients& inv, const DriveState& ds,
                   const ParameterSchedule& sched, double t) {
  (void)sched;
  if (n < 0 || n > kMaxQuantumNumber)
    throw std::invalid_argument("alpha_phase: n must lie in [0, 64]");
  return -(n + 0.5) * inv.theta(t) + ds.phase_integral(t);
}

std::vector<double> make_grid(const InvariantCoefficients& inv, const DriveState& ds, double t,
                              std::size_t n_points, double span_sigmas) {
  const double sigma = std::sqrt(inv.g_minus(t) / inv.omega_I());
  const Complex b = ds.beta(t);
  const double center = -std::sqrt(2.0 * inv.g_minus(t) / inv.omega_I()) * b.real();
  std::vector<double> grid(n_points);
  const double lo = center - span_sigmas * sigma;
  const double hi = center + span_sigmas * sigma;
  for (std::size_t i = 0; i < n_points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
  return grid;
}

WaveFunctionSample eval_psi(int n, const InvariantCoefficients& inv, const DriveState& ds,
                            const ParameterSchedule& sched, double t,
                            std::vector<double> grid) {
  if (n < 0 || n > kMaxQuantumNumber)
    throw std::invalid_argument("eval_psi: n must lie in [0, 64]");
  if (grid.size() < 2) throw std::invalid_argument("eval_psi: grid too short");
  double max_step = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i]))
      throw std::invalid_argument("eval_psi: grid must be strictly increasing");
    max_step = std::max(max_step, grid[i + 1] - grid[i]);
  }

  const double gm = inv.g_minus(t);
  const double g0 = inv.g_zero(t);
  const double wi = inv.omega_I();
  const double sigma = std::sqrt(gm / wi);
  if (max_step > sigma / 16.0)
    throw std::invalid_argument("eval_psi: grid too coarse for packet width (need >= 16 points per sigma)");

  const Complex b = ds.beta(t);
  WaveFunctionSample s;
  s.n = n;
  s.t = t;
  s.delta_q = std::sqrt(2.0 * gm / wi) * b.real();
  s.delta_p = std::sqrt(2.0 * wi / gm) * b.imag();
  s.alpha_n = alpha_phase(n, inv, ds, sched, t);

  // (2^n n!)^{-1/2} in log space.
  const double log_norm = -0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
  const double prefactor = std::exp(log_norm) * std::pow(wi / (M_PI * gm), 0.25);
  const Complex phase = std::exp(Complex{0.0, s.alpha_n});
  const double scale = std::sqrt(wi / gm);

  s.grid = std::move(grid);
  s.psi.resize(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double q = s.grid[i];
    const double xs = scale * (q + s.delta_q);
    const Complex expo{-0.5 * (wi / gm) * (q + s.delta_q) * (q + s.delta_q),
                       -0.5 * (g0 / gm) * q * q - s.delta_p * q};
    s.psi[i] = phase * prefactor * std::exp(expo) * hermite(n, xs);
  }
  return s;
}

std::vector<Complex> apply_invariant_operator(const InvariantCoefficients& inv,
                                              const DriveState& ds, double t,
                                              std::span<const double> grid,
                                              std::span<const Complex> phi) {
  const double h = grid_spacing(grid);
  const double gm = inv.g_minus(t), g0 = inv.g_zero(t), gp = inv.g_plus(t);
  const double g1 = ds.g1(t), g2 = ds.g2(t), g3 = ds.g3(t);
  const auto d1 = derivative1(phi, h);
  const auto d2 = derivative2(phi, h);
  std::vector<Complex> out(phi.size());
  const Complex im{0.0, 1.0};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double q = grid[i];
    // p^2 = -d^2/dq^2;  (pq+qp)/2 = -i (q d/dq + 1/2)
    out[i] = -0.5 * gm * d2[i] - im * g0 * (q * d1[i] + 0.5 * phi[i]) +
             0.5 * gp * q * q * phi[i] + g1 * q * phi[i] - im * g2 * d1[i] + g3 * phi[i];
  }
  return out;
}

double eigen_residual(int n, const InvariantCoefficients& inv, const DriveState& ds,
                      const ParameterSchedule& sched, double t, std::span<const double> grid) {
  WaveFunctionSample s =
      eval_psi(n, inv, ds, sched, t, std::vector<double>(grid.begin(), grid.end()));
  const auto applied = apply_invariant_operator(inv, ds, t, grid, s.psi);
  const double eig = inv.omega_I() * (n + 0.5);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    num += std::norm(applied[i] - eig * s.psi[i]);
    den += std::norm(s.psi[i]);
  }
  return std::sqrt(num / den);
}

Moments moments(const WaveFunctionSample& sample, const ParameterSchedule& sched,
                const InvariantCoefficients& inv) {
  (void)sched;
  (void)inv;
  const double h = grid_spacing(sample.grid);
  std::vector<double> dens(sample.psi.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(sample.psi[i]);
  const double norm = trapezoid(dens, h);
  if (std::abs(norm - 1.0) > 1e-3)
    throw std::invalid_argument("moments: sample is not normalized (norm=" +
                                std::to_string(norm) + ")");

  Moments m;
  std::vector<double> work(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) work[i] = sample.grid[i] * dens[i];
  m.mean_q = trapezoid(work, h) / norm;
  for (std::size_t i = 0; i < dens.size(); ++i)
    work[i] = (sample.grid[i] - m.mean_q) * (sample.grid[i] - m.mean_q) * dens[i];
  m.var_q = trapezoid(work, h) / norm;

  const auto dpsi = derivative1(sample.psi, h);
  // <p> = Re int conj(psi) (-i psi'), <p^2> = int |psi'|^2.
  Complex mean_p = inner_product(sample.psi, dpsi, h) * Complex{0.0, -1.0};
  m.mean_p = mean_p.real() / norm;
  double p2 = norm_sq(dpsi, h) / norm;
  m.var_p = p2 - m.mean_p * m.mean_p;
  return m;
}

void dump_csv(const WaveFunctionSample& sample, const std::string& path,
              const std::string& scenario_id) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  char buf[160];
  std::snprintf(buf, sizeof buf, "# scenario=%s n=%d t=%.17g\n", scenario_id.c_str(),
                sample.n, sample.t);
  out << buf << "q,re_psi,im_psi,abs2_psi\n";
  for (std::size_t i = 0; i < sample.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", sample.grid[i],
                  sample.psi[i].real(), sample.psi[i].imag(), std::norm(sample.psi[i]));
    out << buf;
  }
}

}  // namespace gdo
