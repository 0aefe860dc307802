#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gdo {

// Natural cubic spline through (x_i, y_i), with first-derivative evaluation.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
      throw std::invalid_argument("CubicSpline: need at least 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("CubicSpline: abscissae must be strictly increasing");

    // Second derivatives from the tridiagonal system (natural boundaries).
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
      const double p = sig * m_[i - 1] + 2.0;
      m_[i] = (sig - 1.0) / p;
      u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
             (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
      u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 1;) m_[i] = m_[i] * m_[i + 1] + u[i];
    m_[0] = m_[n - 1] = 0.0;
  }

  double operator()(double x) const {
    auto [k, h] = locate(x);
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] +
           ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
  }

  double derivative(double x) const {
    auto [k, h] = locate(x);
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return (y_[k + 1] - y_[k]) / h +
           ((3.0 * b * b - 1.0) * m_[k + 1] - (3.0 * a * a - 1.0) * m_[k]) * h / 6.0;
  }

  double x_begin() const { return x_.front(); }
  double x_end() const { return x_.back(); }

 private:
  std::pair<std::size_t, double> locate(double x) const {
    const double slack = 1e-12 * (x_.back() - x_.front());
    if (x < x_.front() - slack || x > x_.back() + slack)
      throw std::domain_error("CubicSpline: evaluation outside sample range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(it - x_.begin() - 1, 0,
                                   static_cast<std::ptrdiff_t>(x_.size()) - 2));
    return {k, x_[k + 1] - x_[k]};
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace gdo
