#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace gdo {

namespace detail {

// Gauss 7 / Kronrod 15 abscissae and weights on [-1, 1].
inline constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F, typename R>
void gk15(F& f, double a, double b, R& kronrod, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  R gauss{};
  kronrod = R{};
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodX[i];
    R fv = f(mid - dx);
    if (i < 7) fv += f(mid + dx);
    kronrod += kKronrodW[i] * fv;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fv;
  }
  kronrod *= half;
  gauss *= half;
  err = std::abs(kronrod - gauss);
}

template <typename F, typename R>
R adapt(F& f, double a, double b, double abs_tol, int depth, R whole, double err) {
  if (err <= abs_tol || depth >= 48) return whole;
  const double mid = 0.5 * (a + b);
  R left, right;
  double err_l, err_r;
  gk15(f, a, mid, left, err_l);
  gk15(f, mid, b, right, err_r);
  return adapt(f, a, mid, 0.5 * abs_tol, depth + 1, left, err_l) +
         adapt(f, mid, b, 0.5 * abs_tol, depth + 1, right, err_r);
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b] to absolute
// tolerance abs_tol.  Works for real- and complex-valued integrands.
template <typename F>
auto gauss_kronrod(F&& f, double a, double b, double abs_tol = 1e-11)
    -> decltype(f(a)) {
  using R = decltype(f(a));
  if (a == b) return R{};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  R whole;
  double err;
  detail::gk15(f, a, b, whole, err);
  return sign * detail::adapt(f, a, b, abs_tol, 0, whole, err);
}

// Single non-adaptive 15-point Kronrod panel (used for composite prefix sums
// over fine grids, where the panel error is negligible).
template <typename F>
auto gk15_panel(F&& f, double a, double b) -> decltype(f(a)) {
  using R = decltype(f(a));
  R v;
  double err;
  detail::gk15(f, a, b, v, err);
  return v;
}

}  // namespace gdo
