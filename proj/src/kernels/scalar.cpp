#include <cmath>

#include "kernels_common.hpp"
#include "lrs/kernels.hpp"

namespace lrs::kernels {
namespace {

void resonant_response(cplx numerator, const double* x, double y, cplx* out, std::size_t n) {
  const double nr = numerator.real(), ni = numerator.imag();
  for (std::size_t i = 0; i < n; ++i) {
    // (nr + i ni)(x - i y) / (x^2 + y^2)
    const double d = 1.0 / (x[i] * x[i] + y * y);
    out[i] = cplx((nr * x[i] + ni * y) * d, (ni * x[i] - nr * y) * d);
  }
}

void scaled_outer_product(cplx scale, const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                          const cplx* g, cplx* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const cplx sa = detail::cmul(scale, a[i]);
    cplx* row = out + i * nb;
    const cplx* gi = g + i;
    for (std::size_t j = 0; j < nb; ++j) row[j] = detail::cmul(detail::cmul(sa, b[j]), gi[j]);
  }
}

void abs2(const cplx* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

// Reference summation order: four interleaved partial sums over full blocks,
// folded as (s0 + s2) + (s1 + s3), then the leftover tail.
template <class Term>
double blocked_row_sum(std::size_t ny, Term&& t) {
  double s = 0.5 * (t(0) + t(ny - 1));
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t j = 1;
  for (; j + 4 <= ny - 1; j += 4)
    for (std::size_t k = 0; k < 4; ++k) acc[k] += t(j + k);
  double tail = 0.0;
  for (; j + 1 < ny; ++j) tail += t(j);
  return s + (((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail);
}

double row_sum(const double* r, std::size_t ny) {
  return blocked_row_sum(ny, [r](std::size_t j) { return r[j]; });
}

double row_sum_abs2(const cplx* r, std::size_t ny) {
  return blocked_row_sum(ny, [r](std::size_t j) { return r[j].real() * r[j].real() + r[j].imag() * r[j].imag(); });
}

double trapezoid_2d(const double* v, std::size_t nx, std::size_t ny) {
  if (ny < 2) return 0.0;
  return detail::combine_rows(nx, [&](std::size_t i) { return row_sum(v + i * ny, ny); });
}

double abs2_trapezoid_2d(const cplx* v, std::size_t nx, std::size_t ny) {
  if (ny < 2) return 0.0;
  return detail::combine_rows(nx, [&](std::size_t i) { return row_sum_abs2(v + i * ny, ny); });
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar,         resonant_response, scaled_outer_product, abs2,
                                 trapezoid_2d, abs2_trapezoid_2d};
  return table;
}

}  // namespace lrs::kernels
