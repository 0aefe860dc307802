#include "gdo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gdo {

DenseSolution::DenseSolution(double t0, double t1, std::size_t n_nodes, std::size_t dim)
    : t0_(t0),
      t1_(t1),
      h_((t1 - t0) / static_cast<double>(n_nodes - 1)),
      n_nodes_(n_nodes),
      dim_(dim),
      y_(n_nodes * dim),
      dy_(n_nodes * dim) {}

void DenseSolution::set_node(std::size_t k, std::span<const double> y,
                             std::span<const double> dy) {
  std::copy(y.begin(), y.end(), y_.begin() + static_cast<std::ptrdiff_t>(k * dim_));
  std::copy(dy.begin(), dy.end(), dy_.begin() + static_cast<std::ptrdiff_t>(k * dim_));
}

std::pair<std::size_t, double> DenseSolution::locate(double t) const {
  const double span = t1_ - t0_;
  const double slack = 1e-12 * std::abs(span);
  if (t < t0_ - slack || t > t1_ + slack)
    throw std::domain_error("DenseSolution: t=" + std::to_string(t) + " outside window [" +
                            std::to_string(t0_) + ", " + std::to_string(t1_) + "]");
  double s = (t - t0_) / h_;
  auto k = static_cast<std::size_t>(std::clamp(
      static_cast<std::ptrdiff_t>(s), std::ptrdiff_t{0},
      static_cast<std::ptrdiff_t>(n_nodes_ - 2)));
  double u = s - static_cast<double>(k);
  u = std::clamp(u, 0.0, 1.0);
  return {k, u};
}

double DenseSolution::value(double t, std::size_t comp) const {
  auto [k, u] = locate(t);
  const double y0 = y_[k * dim_ + comp];
  const double y1 = y_[(k + 1) * dim_ + comp];
  const double m0 = dy_[k * dim_ + comp] * h_;
  const double m1 = dy_[(k + 1) * dim_ + comp] * h_;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 +
         (u3 - u2) * m1;
}

double DenseSolution::derivative(double t, std::size_t comp) const {
  auto [k, u] = locate(t);
  const double y0 = y_[k * dim_ + comp];
  const double y1 = y_[(k + 1) * dim_ + comp];
  const double m0 = dy_[k * dim_ + comp] * h_;
  const double m1 = dy_[(k + 1) * dim_ + comp] * h_;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y0 + (3 * u2 - 4 * u + 1) * m0 + (-6 * u2 + 6 * u) * y1 +
          (3 * u2 - 2 * u) * m1) /
         h_;
}

void DenseSolution::value(double t, std::span<double> out) const {
  for (std::size_t c = 0; c < dim_; ++c) out[c] = value(t, c);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,  0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

DenseSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0, double t0,
                            double t1, const OdeOptions& opts) {
  if (!(t1 > t0)) throw std::invalid_argument("integrate_ode: t1 must exceed t0");
  const std::size_t dim = y0.size();
  const std::size_t n_nodes = opts.n_dense + 1;
  DenseSolution sol(t0, t1, n_nodes, dim);
  const double node_h = (t1 - t0) / static_cast<double>(opts.n_dense);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k[7];
  for (auto& s : k) s.resize(dim);
  std::vector<double> y_stage(dim), y_new(dim), err(dim);

  rhs(t0, y, k[0]);
  sol.set_node(0, y, k[0]);

  double t = t0;
  double h = node_h;  // conservative start; controller adapts
  const double h_min = 1e-14 * (t1 - t0);
  std::size_t next_node = 1;
  std::size_t steps = 0;

  while (next_node < n_nodes) {
    const double t_node = t0 + node_h * static_cast<double>(next_node);
    bool clamped = false;
    double h_try = h;
    if (t + h_try >= t_node - 1e-14 * (t1 - t0)) {
      h_try = t_node - t;
      clamped = true;
    }

    // k[0] holds f(t, y) (FSAL).
    for (int i = 1; i < 7; ++i) {
      for (std::size_t c = 0; c < dim; ++c) {
        double acc = 0.0;
        for (int j = 0; j < i; ++j) acc += kA[i][j] * k[j][c];
        y_stage[c] = y[c] + h_try * acc;
      }
      rhs(t + kC[i] * h_try, y_stage, k[i]);
    }
    for (std::size_t c = 0; c < dim; ++c) {
      double acc5 = 0.0, acc4 = 0.0;
      for (int j = 0; j < 7; ++j) {
        acc5 += kB5[j] * k[j][c];
        acc4 += kB4[j] * k[j][c];
      }
      y_new[c] = y[c] + h_try * acc5;
      err[c] = h_try * (acc5 - acc4);
    }

    double err_norm = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double scale = opts.atol + opts.rtol * std::max(std::abs(y[c]), std::abs(y_new[c]));
      const double e = err[c] / scale;
      err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(dim));

    if (err_norm <= 1.0) {
      t += h_try;
      y.swap(y_new);
      std::copy(k[6].begin(), k[6].end(), k[0].begin());  // FSAL
      if (clamped) {
        sol.set_node(next_node, y, k[0]);
        ++next_node;
        t = t_node;  // absorb roundoff
      }
    }

    const double factor =
        std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
    const double h_ctrl = (clamped && err_norm <= 1.0) ? h : h_try;
    h = std::clamp(h_ctrl * factor, h_min, t1 - t0);
    if (h <= h_min && err_norm > 1.0)
      throw std::runtime_error("integrate_ode: step size underflow at t=" + std::to_string(t));
    if (++steps > opts.max_steps)
      throw std::runtime_error("integrate_ode: max step count exceeded");
  }
  return sol;
}

}  // namespace gdo
