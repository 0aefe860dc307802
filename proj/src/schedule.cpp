#include "gdo/schedule.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "gdo/spline.hpp"

namespace gdo {

Coefficient::Coefficient()
    : value_([](double) { return 0.0; }), deriv_([](double) { return 0.0; }) {}

Coefficient::Coefficient(std::function<double(double)> v, std::function<double(double)> d)
    : value_(std::move(v)), deriv_(std::move(d)) {}

Coefficient Coefficient::constant(double value) {
  return {[value](double) { return value; }, [](double) { return 0.0; }};
}

Coefficient Coefficient::analytic(std::function<double(double)> value,
                                  std::function<double(double)> deriv) {
  return {std::move(value), std::move(deriv)};
}

Coefficient Coefficient::sampled(std::vector<double> times, std::vector<double> values) {
  auto spline = std::make_shared<CubicSpline>(std::move(times), std::move(values));
  return {[spline](double t) { return (*spline)(t); },
          [spline](double t) { return spline->derivative(t); }};
}

std::vector<Violation> validate(const ParameterSchedule& sched, double t_begin, double t_end,
                                int n_check, double tol_per) {
  if (!(t_end > t_begin)) throw std::invalid_argument("validate: empty window");
  if (n_check < 2) throw std::invalid_argument("validate: n_check must be >= 2");

  std::vector<Violation> out;
  const double h = (t_end - t_begin) / (n_check - 1);
  for (int i = 0; i < n_check; ++i) {
    const double t = t_begin + h * i;
    const double m = sched.M(t);
    if (!(m > 0.0)) out.push_back({"M>0", t, m, 0.0});
    const double w2 = sched.omega_sq(t), y = sched.Y(t);
    if (!(w2 - y * y > 0.0)) out.push_back({"omega_sq-Y^2>0", t, w2, y});
  }
  if (sched.period) {
    const double tau = *sched.period;
    const std::pair<const char*, const Coefficient*> coeffs[] = {
        {"M", &sched.M}, {"Y", &sched.Y}, {"omega_sq", &sched.omega_sq},
        {"F", &sched.F}, {"G", &sched.G}};
    for (int i = 0; i < n_check; ++i) {
      const double t = t_begin + h * i;
      for (auto [name, c] : coeffs) {
        try {
          const double a = (*c)(t), b = (*c)(t + tau);
          if (std::abs(b - a) > tol_per * (1.0 + std::abs(a)))
            out.push_back({std::string("periodicity:") + name, t, a, b});
        } catch (const std::domain_error&) {
          // sampled table does not extend to t+tau
          out.push_back({std::string("periodicity:") + name + ":undefined", t, 0.0, 0.0});
        }
      }
    }
  }
  return out;
}

Preset preset_from_string(const std::string& name) {
  if (name == "A" || name == "a") return Preset::A;
  if (name == "B" || name == "b") return Preset::B;
  if (name == "C" || name == "c") return Preset::C;
  if (name == "D" || name == "d") return Preset::D;
  throw std::invalid_argument("unknown preset '" + name + "' (expected A, B, C or D)");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::A: return "A";
    case Preset::B: return "B";
    case Preset::C: return "C";
    case Preset::D: return "D";
  }
  return "?";
}

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry = {
      {"A", {"m", "omega0", "F0"}, {},
       "constant mass and frequency, constant coordinate force"},
      {"B", {"m", "omega", "gamma"}, {"f0", "omega_e"},
       "Caldirola-Kanai damped oscillator, optional force f0 sin(omega_e t)"},
      {"C", {"m", "omega", "F0", "omega_e"}, {},
       "undamped oscillator driven by F0 sin(omega_e t)"},
      {"D", {"m0", "Omega", "gamma", "mu", "nu"}, {"F0", "omega_e"},
       "damped pulsating mass, optional force F0 sin(omega_e t)"},
  };
  return registry;
}

namespace {

double require(const std::map<std::string, double>& params, const std::string& key,
               Preset preset) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("preset " + to_string(preset) + ": missing constant '" + key +
                                "'");
  return it->second;
}

double optional_or(const std::map<std::string, double>& params, const std::string& key,
                   double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

ParameterSchedule make_preset(Preset preset, const std::map<std::string, double>& params) {
  ParameterSchedule s;
  switch (preset) {
    case Preset::A: {
      const double m = require(params, "m", preset);
      const double omega0 = require(params, "omega0", preset);
      const double f0 = require(params, "F0", preset);
      if (!(m > 0)) throw std::invalid_argument("preset A: mass must be positive");
      s.M = Coefficient::constant(m);
      s.omega_sq = Coefficient::constant(omega0 * omega0);
      s.F = Coefficient::constant(f0);
      s.period = 2.0 * M_PI / omega0;  // any tau works for a static Hamiltonian
      break;
    }
    case Preset::B: {
      const double m = require(params, "m", preset);
      const double omega = require(params, "omega", preset);
      const double gamma = require(params, "gamma", preset);
      const double f0 = optional_or(params, "f0", 0.0);
      const double omega_e = optional_or(params, "omega_e", 0.0);
      if (!(m > 0)) throw std::invalid_argument("preset B: mass must be positive");
      if (f0 != 0.0 && omega_e == 0.0)
        throw std::invalid_argument("preset B: drive needs omega_e");
      s.M = Coefficient::analytic([m, gamma](double t) { return m * std::exp(2 * gamma * t); },
                                  [m, gamma](double t) {
                                    return 2 * gamma * m * std::exp(2 * gamma * t);
                                  });
      s.omega_sq = Coefficient::constant(omega * omega);
      if (f0 != 0.0) {
        // H_CK carries +e^{2 gamma t} f(t) q; our convention is -F q.
        s.F = Coefficient::analytic(
            [f0, gamma, omega_e](double t) {
              return -std::exp(2 * gamma * t) * f0 * std::sin(omega_e * t);
            },
            [f0, gamma, omega_e](double t) {
              return -std::exp(2 * gamma * t) * f0 *
                     (2 * gamma * std::sin(omega_e * t) + omega_e * std::cos(omega_e * t));
            });
      }
      if (gamma == 0.0) {
        s.period = (omega_e != 0.0) ? 2.0 * M_PI / omega_e : 2.0 * M_PI / omega;
      }
      break;
    }
    case Preset::C: {
      const double m = require(params, "m", preset);
      const double omega = require(params, "omega", preset);
      const double f0 = require(params, "F0", preset);
      const double omega_e = require(params, "omega_e", preset);
      if (!(m > 0)) throw std::invalid_argument("preset C: mass must be positive");
      if (omega_e == 0.0) throw std::invalid_argument("preset C: omega_e must be nonzero");
      s.M = Coefficient::constant(m);
      s.omega_sq = Coefficient::constant(omega * omega);
      // f(t) = -F0 sin(omega_e t) in the CK form, so F(t) = +F0 sin(omega_e t).
      s.F = Coefficient::analytic(
          [f0, omega_e](double t) { return f0 * std::sin(omega_e * t); },
          [f0, omega_e](double t) { return f0 * omega_e * std::cos(omega_e * t); });
      s.period = 2.0 * M_PI / omega_e;
      break;
    }
    case Preset::D: {
      const double m0 = require(params, "m0", preset);
      const double big_omega = require(params, "Omega", preset);
      const double gamma = require(params, "gamma", preset);
      const double mu = require(params, "mu", preset);
      const double nu = require(params, "nu", preset);
      const double f0 = optional_or(params, "F0", 0.0);
      const double omega_e = optional_or(params, "omega_e", 0.0);
      if (!(m0 > 0)) throw std::invalid_argument("preset D: mass must be positive");
      if (f0 != 0.0 && omega_e == 0.0)
        throw std::invalid_argument("preset D: drive needs omega_e");
      // L(t) = gamma t + mu sin(nu t); M = m0 e^{2L}.
      auto lam = [gamma, mu, nu](double t) { return gamma * t + mu * std::sin(nu * t); };
      auto lam1 = [gamma, mu, nu](double t) { return gamma + mu * nu * std::cos(nu * t); };
      auto lam2 = [mu, nu](double t) { return -mu * nu * nu * std::sin(nu * t); };
      auto lam3 = [mu, nu](double t) { return -mu * nu * nu * nu * std::cos(nu * t); };
      s.M = Coefficient::analytic(
          [m0, lam](double t) { return m0 * std::exp(2 * lam(t)); },
          [m0, lam, lam1](double t) { return 2 * lam1(t) * m0 * std::exp(2 * lam(t)); });
      // omega^2 = Omega^2 + (sqrt(M))''/sqrt(M) = Omega^2 + L'' + L'^2.
      s.omega_sq = Coefficient::analytic(
          [big_omega, lam1, lam2](double t) {
            const double l1 = lam1(t);
            return big_omega * big_omega + lam2(t) + l1 * l1;
          },
          [lam1, lam2, lam3](double t) { return lam3(t) + 2 * lam1(t) * lam2(t); });
      if (f0 != 0.0) {
        s.F = Coefficient::analytic(
            [f0, omega_e](double t) { return f0 * std::sin(omega_e * t); },
            [f0, omega_e](double t) { return f0 * omega_e * std::cos(omega_e * t); });
      }
      if (gamma == 0.0 && nu != 0.0) s.period = 2.0 * M_PI / nu;
      break;
    }
  }
  return s;
}

SRepresentation to_s_representation(const ParameterSchedule& sched) {
  auto omega_at = [sched](double t) {
    const double w2 = sched.omega_sq(t);
    if (!(w2 > 0.0))
      throw std::domain_error("to_s_representation: omega_sq <= 0 at t=" + std::to_string(t));
    return std::sqrt(w2);
  };
  SRepresentation rep;
  rep.s1 = [sched](double t) { return Complex{0.0, -0.5 * sched.Y(t)}; };
  rep.s2 = [omega_at](double t) { return 0.5 * omega_at(t); };
  rep.s3 = [sched, omega_at](double t) {
    const double m = sched.M(t);
    const double w = omega_at(t);
    return Complex{-sched.F(t), m * w * sched.G(t)} / std::sqrt(2.0 * m * w);
  };
  return rep;
}

}  // namespace gdo
