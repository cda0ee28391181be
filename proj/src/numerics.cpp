#include "lrs/numerics.hpp"

#include "lrs/kernels.hpp"

namespace lrs {

double grid_integrate_2d(std::span<const double> values, std::size_t nx, std::size_t ny, double dx,
                         double dy) {
  if (values.size() != nx * ny) throw DomainError("grid_integrate_2d: size mismatch");
  if (nx < 2 || ny < 2) return 0.0;
  return kernels::active().trapezoid_2d(values.data(), nx, ny) * dx * dy;
}

double grid_integrate_abs2_2d(std::span<const std::complex<double>> values, std::size_t nx,
                              std::size_t ny, double dx, double dy) {
  if (values.size() != nx * ny) throw DomainError("grid_integrate_abs2_2d: size mismatch");
  if (nx < 2 || ny < 2) return 0.0;
  return kernels::active().abs2_trapezoid_2d(values.data(), nx, ny) * dx * dy;
}

double quadratic_peak(std::span<const double> x, std::span<const double> y, std::size_t i) {
  if (x.size() != y.size() || i >= x.size()) throw DomainError("quadratic_peak: bad index");
  if (i == 0 || i + 1 >= x.size()) return x[i];
  const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  // Lagrange parabola; vertex where the derivative vanishes
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv < 0.0)) return x1;
  const double v = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  return std::clamp(v, x0, x2);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = (i + 1 == n) ? hi : lo + (hi - lo) * t;
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("logspace: bounds must be positive");
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (std::size_t i = 0; i < n; ++i) e[i] = std::exp(e[i]);
  if (n > 1) {
    e.front() = lo;
    e.back() = hi;
  }
  return e;
}

}  // namespace lrs
