#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "gdo/defs.hpp"

namespace gdo {

// Uniform-grid finite-difference and quadrature helpers shared by the
// wave-function checks, the moment extraction, and the verification oracle.
// Samples are treated as zero outside the grid, which is consistent with
// wave packets that decay below roundoff before the boundary.

inline double grid_spacing(std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("grid too short");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-9 * std::abs(h))
      throw std::invalid_argument("grid must be uniform");
  }
  if (!(h > 0)) throw std::invalid_argument("grid must be strictly increasing");
  return h;
}

// Fourth-order centered first derivative.
inline std::vector<Complex> derivative1(std::span<const Complex> f, double h) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n);
  auto at = [&](std::ptrdiff_t i) -> Complex {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? Complex{0.0} : f[static_cast<std::size_t>(i)];
  };
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] =
        (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
  return out;
}

// Fourth-order centered second derivative.
inline std::vector<Complex> derivative2(std::span<const Complex> f, double h) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n);
  auto at = [&](std::ptrdiff_t i) -> Complex {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? Complex{0.0} : f[static_cast<std::size_t>(i)];
  };
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] =
        (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
        (12.0 * h * h);
  return out;
}

inline double trapezoid(std::span<const double> f, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i];
  if (!f.empty()) acc -= 0.5 * (f.front() + f.back());
  return acc * h;
}

// <a|b> = integral of conj(a) * b.
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b, double h) {
  Complex acc{0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  if (!a.empty()) acc -= 0.5 * (std::conj(a.front()) * b.front() + std::conj(a.back()) * b.back());
  return acc * h;
}

inline double norm_sq(std::span<const Complex> a, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i]);
  if (!a.empty()) acc -= 0.5 * (std::norm(a.front()) + std::norm(a.back()));
  return acc * h;
}

}  // namespace gdo

#include "gdo/schedule.hpp"

namespace gdo {

// H_T psi with p = -i d/dq by 4th-order differences:
//   H_T = -(1/2M) d^2/dq^2 - i Y (q d/dq + 1/2) + (M w^2/2) q^2 - F q + i G d/dq.
// One implementation shared by the Schroedinger-residual check and the
// expectation-value route of the Berry phase.
inline std::vector<Complex> apply_hamiltonian(const ParameterSchedule& sched,
                                              std::span<const double> grid,
                                              std::span<const Complex> psi, double t) {
  const double h = grid_spacing(grid);
  const double m = sched.M(t), y = sched.Y(t), w2 = sched.omega_sq(t);
  const double f = sched.F(t), g = sched.G(t);
  const auto d1 = derivative1(psi, h);
  const auto d2 = derivative2(psi, h);
  std::vector<Complex> out(psi.size());
  const Complex im{0.0, 1.0};
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double q = grid[i];
    out[i] = -d2[i] / (2.0 * m) - im * y * (q * d1[i] + 0.5 * psi[i]) +
             (0.5 * m * w2 * q * q - f * q) * psi[i] + im * g * d1[i];
  }
  return out;
}

}  // namespace gdo
