#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gdo {

// dy/dt = f(t, y); dydt is preallocated to y.size().
using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  // Number of uniform output nodes minus one (node spacing = span / n_dense).
  // Steps are clamped so every node is hit exactly; values and derivatives at
  // the nodes feed a cubic Hermite interpolant.
  std::size_t n_dense = 4096;
  std::size_t max_steps = 4000000;
};

// Solution of an ODE system on [t0, t1], stored at uniform nodes with the
// exact RHS derivative at each node.  Evaluation between nodes is piecewise
// cubic Hermite; interpolation error is far below integration error for the
// default node counts.
class DenseSolution {
 public:
  DenseSolution() = default;
  DenseSolution(double t0, double t1, std::size_t n_nodes, std::size_t dim);

  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  std::size_t dim() const { return dim_; }
  std::size_t nodes() const { return n_nodes_; }
  double node_time(std::size_t k) const { return t0_ + h_ * static_cast<double>(k); }
  double node_value(std::size_t k, std::size_t comp) const { return y_[k * dim_ + comp]; }
  double node_derivative(std::size_t k, std::size_t comp) const { return dy_[k * dim_ + comp]; }

  double value(double t, std::size_t comp) const;
  double derivative(double t, std::size_t comp) const;
  void value(double t, std::span<double> out) const;

  void set_node(std::size_t k, std::span<const double> y, std::span<const double> dy);

 private:
  // Returns the segment index and local coordinate; throws outside the window.
  std::pair<std::size_t, double> locate(double t) const;

  double t0_ = 0.0, t1_ = 0.0, h_ = 0.0;
  std::size_t n_nodes_ = 0, dim_ = 0;
  std::vector<double> y_, dy_;  // n_nodes x dim, row-major
};

// Adaptive Dormand-Prince 5(4) with error control per OdeOptions.
// Throws std::runtime_error on step failure.
DenseSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0, double t0,
                            double t1, const OdeOptions& opts = {});

}  // namespace gdo
