#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdo/defs.hpp"

namespace gdo {

// One time-dependent coefficient with an exact or interpolated first
// derivative.  Analytic presets carry exact derivatives; sampled tables use a
// cubic-spline interpolant.
class Coefficient {
 public:
  Coefficient();  // identically zero
  static Coefficient constant(double value);
  static Coefficient analytic(std::function<double(double)> value,
                              std::function<double(double)> deriv);
  static Coefficient sampled(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const { return value_(t); }
  double deriv(double t) const { return deriv_(t); }

 private:
  Coefficient(std::function<double(double)> v, std::function<double(double)> d);
  std::function<double(double)> value_, deriv_;
};

// Time-dependent coefficients of the quadratic Hamiltonian
//   H_T = p^2/(2M) + (Y/2)(pq+qp) + (M w^2/2) q^2 - F q - G p,   hbar = 1.
struct ParameterSchedule {
  Coefficient M;         // mass, must stay positive
  Coefficient Y;         // pq+qp cross coefficient
  Coefficient omega_sq;  // squared frequency
  Coefficient F;         // coordinate drive (enters as -F q)
  Coefficient G;         // momentum drive (enters as -G p)
  std::optional<double> period;
  double t0 = 0.0;
};

struct Violation {
  std::string invariant;  // which constraint failed
  double t;
  double value_a;
  double value_b;
};

// Checks M > 0, omega^2 - Y^2 > 0, and (when declared) periodicity of every
// coefficient on an n_check-point grid over [t_begin, t_end].  Violations are
// data, not errors.
std::vector<Violation> validate(const ParameterSchedule& sched, double t_begin, double t_end,
                                int n_check, double tol_per = 1e-9);

enum class Preset { A, B, C, D };

Preset preset_from_string(const std::string& name);
std::string to_string(Preset p);

struct PresetInfo {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::string description;
};
const std::vector<PresetInfo>& preset_registry();

// Builds one of the stock scenarios:
//   A: constant oscillator with constant force       (m, omega0, F0)
//   B: Caldirola-Kanai damped oscillator             (m, omega, gamma [, f0, omega_e])
//      drive f(t) = f0 sin(omega_e t) enters the CK Hamiltonian as
//      +e^{2 gamma t} f(t) q, i.e. F(t) = -e^{2 gamma t} f(t) here.
//   C: undamped special case of B                    (m, omega, F0, omega_e)
//      f(t) = -F0 sin(omega_e t), i.e. F(t) = +F0 sin(omega_e t).
//   D: damped pulsating oscillator                   (m0, Omega, gamma, mu, nu [, F0, omega_e])
//      M = m0 e^{2 L}, L = gamma t + mu sin(nu t), omega^2 = Omega^2 + L'' + L'^2,
//      F(t) = F0 sin(omega_e t).
// Throws std::invalid_argument for unknown presets, missing constants, or a
// non-positive mass.
ParameterSchedule make_preset(Preset preset, const std::map<std::string, double>& params);

// Coefficients of H_T rewritten on fixed-frequency ladder operators,
//   H_T = s1 a^2 + s1* a^+2 + s2 (a^+ a + a a^+) + s3 a^+ + s3* a,
// with s1 = -iY/2, s2 = omega/2, s3 = (-F + i M omega G)/sqrt(2 M omega).
// Evaluation throws std::domain_error where omega^2 <= 0.
struct SRepresentation {
  std::function<Complex(double)> s1;
  std::function<double(double)> s2;
  std::function<Complex(double)> s3;
};

SRepresentation to_s_representation(const ParameterSchedule& sched);

}  // namespace gdo
