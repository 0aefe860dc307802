#include <doctest.h>

#include <cmath>

#include "gdo/fdops.hpp"
#include "gdo/quadrature.hpp"
#include "gdo/wavefunction.hpp"

using gdo::Coefficient;
using gdo::Complex;
using gdo::ParameterSchedule;
using gdo::Preset;

namespace {

struct Pipeline {
  ParameterSchedule sched;
  gdo::ClassicalBasis basis;
  gdo::InvariantCoefficients inv;
  gdo::DriveState ds;
};

Pipeline make_pipeline(ParameterSchedule sched, double t_end, Complex beta0 = {},
                       bool comoving = false) {
  auto basis = gdo::solve_classical(sched, 0.0, t_end, 1e-12);
  auto inv = gdo::build_invariant(basis, sched);
  if (comoving) beta0 = gdo::comoving_beta0(inv, sched);
  auto ds = gdo::solve_beta(inv, sched, beta0);
  return {std::move(sched), std::move(basis), std::move(inv), std::move(ds)};
}

Pipeline example_a() {
  return make_pipeline(gdo::make_preset(Preset::A, {{"m", 1.0}, {"omega0", 1.0}, {"F0", 0.5}}),
                       12.0, {}, true);
}

double grid_norm(const gdo::WaveFunctionSample& s) {
  std::vector<double> dens(s.psi.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(s.psi[i]);
  return gdo::trapezoid(dens, gdo::grid_spacing(s.grid));
}

}  // namespace

TEST_CASE("hermite polynomials: recurrence values and range guard") {
  CHECK(gdo::hermite(0, 0.37) == 1.0);
  CHECK(gdo::hermite(1, 0.5) == 1.0);
  CHECK(gdo::hermite(2, 0.0) == -2.0);
  CHECK(gdo::hermite(3, 1.0) == -4.0);  // 8x^3 - 12x at x=1
  // direct polynomial H4 = 16x^4 - 48x^2 + 12
  const double x = 0.83;
  CHECK(gdo::hermite(4, x) ==
        doctest::Approx(16 * std::pow(x, 4) - 48 * x * x + 12).epsilon(1e-13));
  CHECK_NOTHROW(gdo::hermite(64, 2.0));
  CHECK_THROWS_AS(gdo::hermite(65, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gdo::hermite(-1, 0.0), std::invalid_argument);
}

TEST_CASE("example A phase: alpha_n = -(n+1/2) w0 t + F0^2 t / (2 m w0^2)") {
  auto p = example_a();
  for (int n : {0, 2}) {
    for (double t : {1.0, 7.5}) {
      const double expected = -(n + 0.5) * t + 0.25 * 0.25 * 2.0 * t;  // F0=0.5 -> F0^2/2 = 1/8
      CHECK(gdo::alpha_phase(n, p.inv, p.ds, p.sched, t) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("undriven phase reduces to -(n+1/2) theta") {
  auto p = make_pipeline(gdo::make_preset(Preset::B, {{"m", 1.0}, {"omega", 2.0}, {"gamma", 0.1}}),
                         10.0);
  for (int n : {0, 3}) {
    for (double t : {2.0, 10.0}) {
      CHECK(gdo::alpha_phase(n, p.inv, p.ds, p.sched, t) ==
            doctest::Approx(-(n + 0.5) * p.inv.theta(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("example C total phase over one cyclic period matches an independent quadrature") {
  // chi_n = alpha_n(tau) - alpha_n(0) evaluated against a quadrature of the
  // paper-independent route: the closed-form displacement is integrated with
  // the adaptive rule, never touching the DriveState prefix tables.
  const double m = 1.0, omega = 3.0, omega_e = 2.0, f0 = 0.7;
  const Complex beta0{0.1, 0.2};
  auto p = make_pipeline(
      gdo::make_preset(Preset::C,
                       {{"m", m}, {"omega", omega}, {"F0", f0}, {"omega_e", omega_e}}),
      4.0 * M_PI, beta0);
  const double tau = 2.0 * M_PI;
  auto beta_closed = [&](double t) {
    const Complex i{0.0, 1.0};
    const Complex rot = std::exp(-i * omega * t);
    return beta0 * rot +
           i * f0 / (2.0 * std::sqrt(2.0 * m * omega)) *
               ((std::exp(i * omega_e * t) - rot) / (omega + omega_e) -
                (std::exp(-i * omega_e * t) - rot) / (omega - omega_e));
  };
  const double drive_integral = gdo::gauss_kronrod(
      [&](double t) {
        const Complex b = beta_closed(t);
        return (b.real() * b.real() - b.imag() * b.imag()) * omega;
      },
      0.0, tau, 1e-12);
  for (int n : {0, 2}) {
    const double chi = gdo::alpha_phase(n, p.inv, p.ds, p.sched, tau) -
                       gdo::alpha_phase(n, p.inv, p.ds, p.sched, 0.0);
    CHECK(chi == doctest::Approx(-(n + 0.5) * omega * tau + drive_integral).epsilon(1e-9));
  }
}

TEST_CASE("example A ground state is a shifted oscillator gaussian") {
  auto p = example_a();
  const double t = 3.7;
  auto s = gdo::eval_psi(0, p.inv, p.ds, p.sched, t, gdo::make_grid(p.inv, p.ds, t));
  CHECK(grid_norm(s) == doctest::Approx(1.0).epsilon(1e-9));
  // center at F0/(m w0^2) = 0.5
  const auto m = gdo::moments(s, p.sched, p.inv);
  CHECK(m.mean_q == doctest::Approx(0.5).epsilon(1e-9));
  // |psi|^2 is the textbook gaussian around the shift
  const double h = gdo::grid_spacing(s.grid);
  for (std::size_t i = 0; i < s.grid.size(); i += 257) {
    const double q = s.grid[i];
    const double expected = std::sqrt(1.0 / M_PI) * std::exp(-(q - 0.5) * (q - 0.5));
    CHECK(std::norm(s.psi[i]) == doctest::Approx(expected).epsilon(1e-8));
  }
  (void)h;
}

TEST_CASE("constant undriven case reproduces the textbook ground state up to phase") {
  ParameterSchedule sched;
  sched.M = Coefficient::constant(1.3);
  sched.omega_sq = Coefficient::constant(2.25);  // omega = 1.5
  auto p = make_pipeline(sched, 8.0);
  const double t = 2.0, m = 1.3, w = 1.5;
  auto s = gdo::eval_psi(0, p.inv, p.ds, p.sched, t, gdo::make_grid(p.inv, p.ds, t));
  const Complex gauge = s.psi[s.grid.size() / 2] /
                        (std::pow(m * w / M_PI, 0.25) *
                         std::exp(-0.5 * m * w * s.grid[s.grid.size() / 2] * s.grid[s.grid.size() / 2]));
  CHECK(std::abs(std::abs(gauge) - 1.0) < 1e-10);
  for (std::size_t i = 0; i < s.grid.size(); i += 311) {
    const double q = s.grid[i];
    const Complex expected = gauge * std::pow(m * w / M_PI, 0.25) * std::exp(-0.5 * m * w * q * q);
    CHECK(std::abs(s.psi[i] - expected) < 1e-10);
  }
}

TEST_CASE("example B state: normalization and mean at t = 1") {
  auto p = make_pipeline(gdo::make_preset(Preset::B, {{"m", 1.0}, {"omega", 2.0}, {"gamma", 0.1}}),
                         10.0, Complex{0.15, -0.1});
  const double t = 1.0;
  auto s = gdo::eval_psi(1, p.inv, p.ds, p.sched, t, gdo::make_grid(p.inv, p.ds, t));
  CHECK(std::abs(grid_norm(s) - 1.0) < 1e-6);
  const auto m = gdo::moments(s, p.sched, p.inv);
  CHECK(m.mean_q == doctest::Approx(-s.delta_q).epsilon(1e-6));
}

TEST_CASE("normalization and orthogonality across scenarios and levels") {
  std::vector<Pipeline> pipes;
  pipes.push_back(example_a());
  pipes.push_back(make_pipeline(
      gdo::make_preset(Preset::B, {{"m", 1.0}, {"omega", 2.0}, {"gamma", 0.1}}), 10.0,
      Complex{0.1, 0.05}));
  pipes.push_back(make_pipeline(
      gdo::make_preset(Preset::C, {{"m", 1.0}, {"omega", 3.0}, {"F0", 0.7}, {"omega_e", 2.0}}),
      4.0 * M_PI, Complex{0.1, 0.2}));
  pipes.push_back(make_pipeline(gdo::make_preset(Preset::D, {{"m0", 1.0},
                                                             {"Omega", 2.0},
                                                             {"gamma", 0.1},
                                                             {"mu", 0.3},
                                                             {"nu", 1.5},
                                                             {"F0", 0.4},
                                                             {"omega_e", 1.0}}),
                                8.0, Complex{0.0, 0.1}));
  for (const auto& p : pipes) {
    const double t_max = p.inv.t_end();
    for (int k = 1; k <= 5; ++k) {
      const double t = t_max * k / 6.0;
      auto grid = gdo::make_grid(p.inv, p.ds, t, 2048, 10.0);
      std::vector<gdo::WaveFunctionSample> states;
      for (int n = 0; n <= 10; n += 2)
        states.push_back(gdo::eval_psi(n, p.inv, p.ds, p.sched, t, grid));
      const double h = gdo::grid_spacing(grid);
      for (std::size_t i = 0; i < states.size(); ++i) {
        CHECK(std::abs(grid_norm(states[i]) - 1.0) < 1e-6);
        for (std::size_t j = i + 1; j < states.size(); ++j)
          CHECK(std::abs(gdo::inner_product(states[i].psi, states[j].psi, h)) < 1e-6);
      }
    }
  }
}

TEST_CASE("eval_psi rejects coarse and non-increasing grids") {
  auto p = example_a();
  CHECK_THROWS_AS(
      gdo::eval_psi(0, p.inv, p.ds, p.sched, 1.0, gdo::make_grid(p.inv, p.ds, 1.0, 64, 8.0)),
      std::invalid_argument);
  std::vector<double> bad = {0.0, 1.0, 0.5};
  CHECK_THROWS_AS(gdo::eval_psi(0, p.inv, p.ds, p.sched, 1.0, bad), std::invalid_argument);
}

TEST_CASE("invariant eigenvalue residual is finite-difference limited") {
  SUBCASE("constant undriven case") {
    ParameterSchedule sched;
    sched.M = Coefficient::constant(1.0);
    sched.omega_sq = Coefficient::constant(4.0);
    auto p = make_pipeline(sched, 5.0);
    auto grid = gdo::make_grid(p.inv, p.ds, 2.0, 2048, 10.0);
    CHECK(gdo::eigen_residual(0, p.inv, p.ds, p.sched, 2.0, grid) < 1e-6);
  }
  SUBCASE("driven example C at n = 0 and n = 3") {
    auto p = make_pipeline(
        gdo::make_preset(Preset::C, {{"m", 1.0}, {"omega", 3.0}, {"F0", 0.7}, {"omega_e", 2.0}}),
        4.0 * M_PI, Complex{0.1, 0.2});
    auto grid = gdo::make_grid(p.inv, p.ds, 2.0, 2048, 10.0);
    CHECK(gdo::eigen_residual(0, p.inv, p.ds, p.sched, 2.0, grid) < 1e-5);
    CHECK(gdo::eigen_residual(3, p.inv, p.ds, p.sched, 2.0, grid) < 1e-4);
  }
  SUBCASE("damped pulsating example D at n = 2") {
    auto p = make_pipeline(gdo::make_preset(Preset::D, {{"m0", 1.0},
                                                        {"Omega", 2.0},
                                                        {"gamma", 0.1},
                                                        {"mu", 0.3},
                                                        {"nu", 1.5},
                                                        {"F0", 0.4},
                                                        {"omega_e", 1.0}}),
                           8.0, Complex{0.0, 0.1});
    auto grid = gdo::make_grid(p.inv, p.ds, 4.0, 2048, 10.0);
    CHECK(gdo::eigen_residual(2, p.inv, p.ds, p.sched, 4.0, grid) < 1e-4);
  }
}

TEST_CASE("phase-gauge consistency of the eigen residual") {
  auto p = example_a();
  const double t = 2.0;
  auto grid = gdo::make_grid(p.inv, p.ds, t, 1024, 9.0);
  auto s = gdo::eval_psi(1, p.inv, p.ds, p.sched, t, grid);
  const double h = gdo::grid_spacing(grid);
  auto residual_of = [&](const std::vector<Complex>& phi) {
    auto applied = gdo::apply_invariant_operator(p.inv, p.ds, t, grid, phi);
    const double eig = p.inv.omega_I() * 1.5;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      num += std::norm(applied[i] - eig * phi[i]);
      den += std::norm(phi[i]);
    }
    return std::sqrt(num / den);
  };
  std::vector<Complex> rotated = s.psi;
  const Complex gauge = std::exp(Complex{0.0, 1.234});
  for (auto& v : rotated) v *= gauge;
  CHECK(residual_of(s.psi) == doctest::Approx(residual_of(rotated)).epsilon(1e-12));
  (void)h;
}

TEST_CASE("moments: minimum-uncertainty ground state of the unit oscillator") {
  ParameterSchedule sched;
  sched.M = Coefficient::constant(1.0);
  sched.omega_sq = Coefficient::constant(1.0);
  auto p = make_pipeline(sched, 5.0);
  auto s = gdo::eval_psi(0, p.inv, p.ds, p.sched, 1.0, gdo::make_grid(p.inv, p.ds, 1.0));
  const auto m = gdo::moments(s, p.sched, p.inv);
  CHECK(m.var_q == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.var_p == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(m.mean_q) < 1e-10);
  CHECK(std::abs(m.mean_p) < 1e-10);
}

TEST_CASE("moments: example B variances carry the damping factors") {
  const double m0 = 1.0, omega = 2.0, gamma = 0.1;
  const double big = std::sqrt(omega * omega - gamma * gamma);
  auto p = make_pipeline(gdo::make_preset(Preset::B, {{"m", m0}, {"omega", omega},
                                                      {"gamma", gamma}}),
                         10.0, Complex{0.1, 0.05});
  for (int n : {0, 2, 6}) {
    const double t = 1.5;
    auto grid = gdo::make_grid(p.inv, p.ds, t, 2048, gdo::level_span_sigmas(n));
    auto s = gdo::eval_psi(n, p.inv, p.ds, p.sched, t, grid);
    const auto mm = gdo::moments(s, p.sched, p.inv);
    const double var_q_exp = (2 * n + 1) * std::exp(-2 * gamma * t) / (2 * m0 * big);
    const double var_p_exp =
        (2 * n + 1) * (big / (2 * std::exp(-2 * gamma * t) / m0)) *
        (1.0 + gamma * gamma / (big * big)) / m0;
    CHECK(mm.var_q == doctest::Approx(var_q_exp).epsilon(1e-4));
    CHECK(mm.var_p == doctest::Approx(var_p_exp).epsilon(1e-4));
  }
}

TEST_CASE("linear drives shift the packet but keep its width") {
  auto driven = make_pipeline(
      gdo::make_preset(Preset::C, {{"m", 1.0}, {"omega", 3.0}, {"F0", 0.7}, {"omega_e", 2.0}}),
      4.0 * M_PI, Complex{0.1, 0.2});
  auto undriven = make_pipeline(
      gdo::make_preset(Preset::C, {{"m", 1.0}, {"omega", 3.0}, {"F0", 0.0}, {"omega_e", 2.0}}),
      4.0 * M_PI);
  const double t = 2.9;
  for (int n : {0, 4}) {
    auto sd = gdo::eval_psi(n, driven.inv, driven.ds, driven.sched, t,
                            gdo::make_grid(driven.inv, driven.ds, t, 2048, 9.0));
    auto su = gdo::eval_psi(n, undriven.inv, undriven.ds, undriven.sched, t,
                            gdo::make_grid(undriven.inv, undriven.ds, t, 2048, 9.0));
    const auto md = gdo::moments(sd, driven.sched, driven.inv);
    const auto mu = gdo::moments(su, undriven.sched, undriven.inv);
    CHECK(md.var_q == doctest::Approx(mu.var_q).epsilon(1e-6));
    CHECK(md.var_p == doctest::Approx(mu.var_p).epsilon(1e-6));
    CHECK(md.mean_q - mu.mean_q == doctest::Approx(-sd.delta_q).epsilon(1e-6));
  }
}

TEST_CASE("moments rejects an unnormalized sample") {
  auto p = example_a();
  auto s = gdo::eval_psi(0, p.inv, p.ds, p.sched, 1.0, gdo::make_grid(p.inv, p.ds, 1.0));
  for (auto& v : s.psi) v *= 2.0;
  CHECK_THROWS_AS(gdo::moments(s, p.sched, p.inv), std::invalid_argument);
}
