#include <doctest.h>

#include <cmath>

#include "gdo/fdops.hpp"
#include "gdo/geometric.hpp"
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

Pipeline example_c(Complex beta0 = {0.1, 0.2}, double f0 = 0.7) {
  return make_pipeline(
      gdo::make_preset(Preset::C, {{"m", 1.0}, {"omega", 3.0}, {"F0", f0}, {"omega_e", 2.0}}),
      5.0 * M_PI, beta0);
}

// Undamped pulsating mass with commensurate pulsation (nu = 2), coordinate
// drive (omega_e = 4) and momentum drive; Omega = 3 makes tau = 2 pi a cyclic
// period with winding 3 while g_- genuinely oscillates.
Pipeline pulsating_cis(double g_amp) {
  const double mu = 0.15, nu = 2.0, big = 3.0;
  auto lam = [=](double t) { return mu * std::sin(nu * t); };
  auto lam1 = [=](double t) { return mu * nu * std::cos(nu * t); };
  auto lam2 = [=](double t) { return -mu * nu * nu * std::sin(nu * t); };
  auto lam3 = [=](double t) { return -mu * nu * nu * nu * std::cos(nu * t); };
  ParameterSchedule s;
  s.M = Coefficient::analytic([=](double t) { return std::exp(2.0 * lam(t)); },
                              [=](double t) { return 2.0 * lam1(t) * std::exp(2.0 * lam(t)); });
  s.omega_sq = Coefficient::analytic(
      [=](double t) { return big * big + lam2(t) + lam1(t) * lam1(t); },
      [=](double t) { return lam3(t) + 2.0 * lam1(t) * lam2(t); });
  s.F = Coefficient::analytic([](double t) { return 0.3 * std::sin(4.0 * t); },
                              [](double t) { return 1.2 * std::cos(4.0 * t); });
  s.G = Coefficient::analytic([g_amp](double t) { return g_amp * std::cos(2.0 * t); },
                              [g_amp](double t) { return -2.0 * g_amp * std::sin(2.0 * t); });
  s.period = M_PI;
  return make_pipeline(s, 5.0 * M_PI, Complex{0.05, -0.1});
}

}  // namespace

TEST_CASE("h coefficients: example C and the unit oscillator") {
  auto p = example_c();
  for (double t : {0.0, 2.2}) {
    const auto h = gdo::h_coefficients(p.inv, p.sched, t);
    CHECK(h.h0 == doctest::Approx(6.0).epsilon(1e-10));  // 2 omega
    // h_+- cancel two O(omega^2) terms, so solver noise survives at ~1e-10
    CHECK(std::abs(h.h_minus) < 1e-9);
    CHECK(std::abs(h.h_plus) < 1e-9);
  }

  ParameterSchedule unit;
  unit.M = Coefficient::constant(1.0);
  unit.omega_sq = Coefficient::constant(1.0);
  auto pu = make_pipeline(unit, 5.0);
  const auto h = gdo::h_coefficients(pu.inv, pu.sched, 1.0);
  CHECK(h.h0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(h.h_plus) < 1e-12);
}

TEST_CASE("h coefficients assemble the same <H> as the grid moments") {
  // <n|H_T|n> = (n+1/2) h0/2 + 2 Re(i W* beta) + (h0/2)|beta|^2 + Re(h_- beta^2)
  auto check_scenario = [](const Pipeline& p, int n, double t) {
    const auto h = gdo::h_coefficients(p.inv, p.sched, t);
    const Complex b = p.ds.beta(t);
    const Complex w = gdo::drive_kernel(p.inv, p.sched, t);
    const double algebraic = (n + 0.5) * 0.5 * h.h0 +
                             2.0 * (Complex{0.0, 1.0} * std::conj(w) * b).real() +
                             0.5 * h.h0 * std::norm(b) + (h.h_minus * b * b).real();
    auto grid = gdo::make_grid(p.inv, p.ds, t, 2048, 10.0);
    auto s = gdo::eval_psi(n, p.inv, p.ds, p.sched, t, grid);
    const double hh = gdo::grid_spacing(grid);
    const auto hpsi = gdo::apply_hamiltonian(p.sched, grid, s.psi, t);
    const double from_grid =
        gdo::inner_product(s.psi, hpsi, hh).real() / gdo::norm_sq(s.psi, hh);
    CHECK(algebraic == doctest::Approx(from_grid).epsilon(1e-6));
  };
  check_scenario(example_c(), 0, 1.3);
  check_scenario(example_c(), 3, 2.6);
  auto b = make_pipeline(
      gdo::make_preset(Preset::B, {{"m", 1.0}, {"omega", 2.0}, {"gamma", 0.1}}), 10.0,
      Complex{0.1, 0.05});
  check_scenario(b, 1, 1.7);
  check_scenario(pulsating_cis(0.25), 2, 0.9);

  // Y != 0 exercises the imaginary parts of h_+-.
  ParameterSchedule wiggly;
  wiggly.M = Coefficient::analytic([](double t) { return 1.2 + 0.3 * std::sin(0.7 * t); },
                                   [](double t) { return 0.21 * std::cos(0.7 * t); });
  wiggly.Y = Coefficient::analytic([](double t) { return 0.25 * std::sin(0.9 * t); },
                                   [](double t) { return 0.225 * std::cos(0.9 * t); });
  wiggly.omega_sq =
      Coefficient::analytic([](double t) { return 4.0 + 0.5 * std::cos(1.1 * t); },
                            [](double t) { return -0.55 * std::sin(1.1 * t); });
  wiggly.F = Coefficient::analytic([](double t) { return 0.6 * std::sin(1.3 * t); },
                                   [](double t) { return 0.78 * std::cos(1.3 * t); });
  wiggly.G = Coefficient::analytic([](double t) { return 0.35 * std::cos(0.8 * t); },
                                   [](double t) { return -0.28 * std::sin(0.8 * t); });
  check_scenario(make_pipeline(wiggly, 15.0, Complex{0.1, -0.05}), 1, 6.3);
}

TEST_CASE("example A: every level is cyclic and every Berry phase vanishes") {
  auto p = make_pipeline(
      gdo::make_preset(Preset::A, {{"m", 1.0}, {"omega0", 1.0}, {"F0", 0.5}}), 14.0, {}, true);
  const double tau = 2.0 * M_PI;
  const auto rep = gdo::cis_conditions(p.inv, p.ds, p.sched, tau, 0.0);
  CHECK(rep.is_cis);
  CHECK(rep.winding == 1);
  CHECK(std::abs(rep.theta0 - 2.0 * M_PI) < 1e-10);
  // sigma0 = const * int e^{i w0 t} over a full period = 0
  CHECK(std::abs(rep.sigma0) < 1e-12);
  for (int n = 0; n <= 3; ++n) {
    const auto r = gdo::berry_phase(n, p.inv, p.ds, p.sched, tau, 0.0);
    CHECK(std::abs(r.gamma_bp) < 1e-8);
    CHECK(r.discrepancy < 1e-6);
  }
}

TEST_CASE("example B with damping has no cyclic states") {
  auto p = make_pipeline(
      gdo::make_preset(Preset::B, {{"m", 1.0}, {"omega", 2.0}, {"gamma", 0.1}}), 20.0);
  const double tau = 2.0 * M_PI / std::sqrt(4.0 - 0.01);
  const auto rep = gdo::cis_conditions(p.inv, p.ds, p.sched, tau, 0.0);
  CHECK_FALSE(rep.is_cis);
  CHECK(rep.reason == "g_- not periodic");
  CHECK_THROWS_AS(gdo::berry_phase(0, p.inv, p.ds, p.sched, tau, 0.0),
                  std::invalid_argument);
}

TEST_CASE("example C: rational ratio gives a cyclic family with winding r") {
  auto p = example_c();
  const double tau = 2.0 * M_PI;  // r = 3, r_e = 2
  const auto rep = gdo::cis_conditions(p.inv, p.ds, p.sched, tau, 0.0);
  CHECK(rep.is_cis);
  CHECK(rep.winding == 3);
  CHECK(std::abs(rep.sigma0) <= rep.tol_sigma);
}

TEST_CASE("theta0 and sigma0 are start-invariant and beta0-independent") {
  auto p = example_c();
  auto p2 = example_c(Complex{-0.4, 0.3});
  const double tau = 2.0 * M_PI;
  const auto rep0 = gdo::cis_conditions(p.inv, p.ds, p.sched, tau, 0.0);
  const auto rep1 = gdo::cis_conditions(p.inv, p.ds, p.sched, tau, 0.7);
  const auto rep2 = gdo::cis_conditions(p2.inv, p2.ds, p2.sched, tau, 0.0);
  CHECK(std::abs(rep0.theta0 - rep1.theta0) < 1e-9);
  CHECK(std::abs(rep0.sigma0 - rep1.sigma0) < 1e-9);  // constant when theta0 in 2 pi Z
  CHECK(std::abs(rep0.theta0 - rep2.theta0) < 1e-12);
  CHECK(std::abs(rep0.sigma0 - rep2.sigma0) < 1e-12);
}

TEST_CASE("example C Berry phase matches the closed form and is n-independent") {
  const double m = 1.0, omega = 3.0, omega_e = 2.0, f0 = 0.7;
  const Complex beta0{0.1, 0.2};
  const int r = 3;
  auto p = example_c(beta0, f0);
  const double tau = 2.0 * M_PI;

  const double denom = omega * omega - omega_e * omega_e;
  const double s2mw = std::sqrt(2.0 * m * omega);
  const double fsq = f0 * f0 / (2.0 * m * omega);
  const double gamma_closed =
      2.0 * M_PI * r *
      (std::norm(beta0) + 2.0 * beta0.imag() * f0 * omega_e / (s2mw * denom) +
       fsq * ((omega * omega + omega_e * omega_e) / (denom * denom) - 1.0 / denom));
  const double p1_closed =
      2.0 * M_PI * r *
      (std::norm(beta0) + 2.0 * beta0.imag() * f0 * omega_e / (s2mw * denom) +
       fsq * ((omega * omega + omega_e * omega_e) / (denom * denom) - 0.5 / denom));
  const double p2_closed = -2.0 * M_PI * r * fsq / denom;
  const double p3_closed = M_PI * r * fsq / denom;

  double gamma_first = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const auto res = gdo::berry_phase(n, p.inv, p.ds, p.sched, tau, 0.0);
    CHECK(res.gamma_bp == doctest::Approx(gamma_closed).epsilon(1e-8));
    CHECK(res.integral_h0_beta_sq == doctest::Approx(p1_closed).epsilon(1e-8));
    CHECK(res.integral_xi == doctest::Approx(p2_closed).epsilon(1e-8));
    CHECK(res.integral_zeta == doctest::Approx(p3_closed).epsilon(1e-8));
    CHECK(res.discrepancy < 1e-6);
    if (n == 0) gamma_first = res.gamma_bp;
    CHECK(std::abs(res.gamma_bp - gamma_first) < 1e-9);  // n-independence
  }
}

TEST_CASE("undriven limit of example C carries no Berry phase") {
  auto p = example_c(Complex{0.0, 0.0}, 0.0);
  const auto res = gdo::berry_phase(2, p.inv, p.ds, p.sched, 2.0 * M_PI, 0.0);
  CHECK(std::abs(res.gamma_bp) < 1e-12);
  CHECK(std::abs(res.gamma_reconstructed) < 1e-6);
}

TEST_CASE("pulsating-mass cyclic scenario: two-route agreement with drives") {
  SUBCASE("coordinate drive only") {
    auto p = pulsating_cis(0.0);
    const auto rep = gdo::cis_conditions(p.inv, p.ds, p.sched, 2.0 * M_PI, 0.0);
    REQUIRE(rep.is_cis);
    CHECK(rep.winding == 3);
    for (int n : {0, 2}) {
      const auto res = gdo::berry_phase(n, p.inv, p.ds, p.sched, 2.0 * M_PI, 0.0);
      CHECK(res.discrepancy < 1e-6);
    }
  }
  SUBCASE("with a momentum drive") {
    auto p = pulsating_cis(0.25);
    const auto rep = gdo::cis_conditions(p.inv, p.ds, p.sched, 2.0 * M_PI, 0.0);
    REQUIRE(rep.is_cis);
    for (int n : {0, 1}) {
      const auto res = gdo::berry_phase(n, p.inv, p.ds, p.sched, 2.0 * M_PI, 0.0);
      CHECK(res.discrepancy < 1e-6);
    }
  }
}

TEST_CASE("cis rejects bad arguments") {
  auto p = example_c();
  CHECK_THROWS_AS(gdo::cis_conditions(p.inv, p.ds, p.sched, -1.0, 0.0),
                  std::invalid_argument);
  // window too short for 2 tau
  CHECK_THROWS_AS(gdo::cis_conditions(p.inv, p.ds, p.sched, 4.0 * M_PI, 0.0),
                  std::invalid_argument);
}
