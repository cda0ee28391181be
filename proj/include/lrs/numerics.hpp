/**
 * numerics.hpp: quadrature and grid integration with controlled tolerances.
 *
 * integrate_adaptive is a globally adaptive Gauss-Kronrod (7/15) scheme:
 * the panel with the largest error estimate is bisected until
 *
 *     sum of panel errors <= max(rel_tol * |value|, abs_tol)
 *
 * The per-panel error estimate is the plain |K15 - G7| difference, which is
 * pessimistic for smooth integrands.  Integrands may be real or complex.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "lrs/errors.hpp"

namespace lrs {

template <class T>
struct QuadratureResult {
  T value{};
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  std::size_t max_subdivisions = 20000;
  /// Each initial interval is first split into this many equal panels.
  std::size_t initial_panels = 1;
};

inline constexpr double kRateRelTol = 1e-6;
inline constexpr double kOracleRelTol = 1e-8;

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return Panel<T>{a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Integrate f over the union of [breaks[i], breaks[i+1]].  breaks must be
/// strictly increasing with at least two entries.
template <class F>
auto integrate_adaptive(F&& f, std::span<const double> breaks, const QuadratureOptions& opts = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (breaks.size() < 2) throw DomainError("integrate_adaptive: need at least two break points");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw DomainError("integrate_adaptive: breaks must increase");
  }

  std::priority_queue<detail::Panel<T>> panels;
  std::size_t evaluations = 0;
  T total{};
  double total_error = 0.0;
  const std::size_t per = std::max<std::size_t>(opts.initial_panels, 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double width = (breaks[i + 1] - breaks[i]) / static_cast<double>(per);
    for (std::size_t p = 0; p < per; ++p) {
      const double a = breaks[i] + width * static_cast<double>(p);
      const double b = (p + 1 == per) ? breaks[i + 1] : a + width;
      auto panel = detail::gauss_kronrod_15<T>(f, a, b);
      evaluations += 15;
      total += panel.value;
      total_error += panel.error;
      panels.push(panel);
    }
  }

  auto converged = [&] {
    return total_error <= std::max(opts.rel_tol * detail::magnitude(total), opts.abs_tol);
  };

  std::size_t subdivisions = 0;
  while (!converged()) {
    if (subdivisions >= opts.max_subdivisions) {
      throw QuadratureError("integrate_adaptive: maximum subdivisions exceeded", total_error,
                            detail::magnitude(total));
    }
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw QuadratureError("integrate_adaptive: panel below machine resolution", total_error,
                            detail::magnitude(total));
    }
    auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
    evaluations += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from the panels to shed accumulated update round-off.
  T value{};
  double error = 0.0;
  std::vector<detail::Panel<T>> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : all) {
    value += p.value;
    error += p.error;
  }
  return {value, error, evaluations};
}

template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  if (!(a < b)) throw DomainError("integrate_adaptive: require a < b");
  const std::array<double, 2> breaks{a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(breaks), opts);
}

/// Integral over the whole real line via x = center + scale * tan(theta).
/// `peaks` are extra abscissae (in x) where the integrand is sharply peaked;
/// they become break points in theta.
template <class F>
auto integrate_real_line(F&& f, double center, double scale, std::span<const double> peaks = {},
                         const QuadratureOptions& opts = {}) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (!(scale > 0.0)) throw DomainError("integrate_real_line: scale must be positive");
  constexpr double half_pi = 1.5707963267948966;
  std::vector<double> breaks{-half_pi, 0.0, half_pi};
  for (double p : peaks) breaks.push_back(std::atan((p - center) / scale));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double l, double r) { return std::abs(l - r) < 1e-12; }),
               breaks.end());
  auto mapped = [&](double theta) -> T {
    const double t = std::tan(theta);
    const double jacobian = scale * (1.0 + t * t);
    return f(center + scale * t) * jacobian;
  };
  return integrate_adaptive(mapped, std::span<const double>(breaks), opts);
}

/// Trapezoidal integral of a row-major nx-by-ny grid with spacings dx, dy.
double grid_integrate_2d(std::span<const double> values, std::size_t nx, std::size_t ny, double dx,
                         double dy);

/// Trapezoidal integral of |z|^2 over a row-major complex grid.
double grid_integrate_abs2_2d(std::span<const std::complex<double>> values, std::size_t nx,
                              std::size_t ny, double dx, double dy);

/// Abscissa of the vertex of the parabola through (x[i-1..i+1], y[i-1..i+1]).
/// Falls back to x[i] at an edge or for a degenerate fit.
double quadratic_peak(std::span<const double> x, std::span<const double> y, std::size_t i);

/// n points from lo to hi inclusive; n == 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace lrs
