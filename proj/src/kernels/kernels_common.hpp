#pragma once

#include <complex>
#include <cstddef>

namespace lrs::kernels::detail {

// Plain product, no C99 Annex G NaN recovery.  Matches the lane arithmetic
// of the vector kernels op for op.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Outer trapezoid over per-row sums, always combined in row order.
template <class RowSum>
double combine_rows(std::size_t nx, RowSum&& row) {
  if (nx == 0) return 0.0;
  if (nx == 1) return 0.0;
  double s = 0.5 * (row(0) + row(nx - 1));
  for (std::size_t i = 1; i + 1 < nx; ++i) s += row(i);
  return s;
}

}  // namespace lrs::kernels::detail
