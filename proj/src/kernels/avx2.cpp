// Compiled with -mavx2 only for this file.  Never call into here unless
// isa_supported(Isa::Avx2) said yes.
#include "lrs/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include "kernels_common.hpp"

namespace lrs::kernels {
namespace {

// Two complex<double> per register: [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (a * b) lane-wise as complex; same operation order as detail::cmul.
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);         // br br
  const __m256d b_im = _mm256_permute_pd(b, 0xF);    // bi bi
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);    // ai ar
  const __m256d t1 = _mm256_mul_pd(a, b_re);         // ar*br ai*br
  const __m256d t2 = _mm256_mul_pd(a_sw, b_im);      // ai*bi ar*bi
  return _mm256_addsub_pd(t1, t2);                   // ar*br-ai*bi, ai*br+ar*bi
}

void resonant_response(cplx numerator, const double* x, double y, cplx* out, std::size_t n) {
  const double nr = numerator.real(), ni = numerator.imag();
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d yy = _mm256_mul_pd(vy, vy);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vnr = _mm256_set1_pd(nr), vni = _mm256_set1_pd(ni);
  const __m256d nry = _mm256_mul_pd(vnr, vy), niy = _mm256_mul_pd(vni, vy);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d d = _mm256_div_pd(one, _mm256_add_pd(_mm256_mul_pd(vx, vx), yy));
    const __m256d re = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(vnr, vx), niy), d);
    const __m256d im = _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(vni, vx), nry), d);
    // interleave re/im into two complex pairs
    const __m256d lo = _mm256_unpacklo_pd(re, im);  // r0 i0 r2 i2
    const __m256d hi = _mm256_unpackhi_pd(re, im);  // r1 i1 r3 i3
    store2(out + i, _mm256_permute2f128_pd(lo, hi, 0x20));
    store2(out + i + 2, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  for (; i < n; ++i) {
    const double d = 1.0 / (x[i] * x[i] + y * y);
    out[i] = cplx((nr * x[i] + ni * y) * d, (ni * x[i] - nr * y) * d);
  }
}

void scaled_outer_product(cplx scale, const cplx* a, std::size_t na, const cplx* b, std::size_t nb,
                          const cplx* g, cplx* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const cplx sa = detail::cmul(scale, a[i]);
    const __m256d vsa = _mm256_setr_pd(sa.real(), sa.imag(), sa.real(), sa.imag());
    cplx* row = out + i * nb;
    const cplx* gi = g + i;
    std::size_t j = 0;
    for (; j + 2 <= nb; j += 2) store2(row + j, cmul2(cmul2(vsa, load2(b + j)), load2(gi + j)));
    for (; j < nb; ++j) row[j] = detail::cmul(detail::cmul(sa, b[j]), gi[j]);
  }
}

inline __m256d abs2_pairs(__m256d v0, __m256d v1) {
  // |z|^2 for four complex values, result lanes ordered z0 z1 z2 z3
  const __m256d s0 = _mm256_mul_pd(v0, v0);  // r0^2 i0^2 r1^2 i1^2
  const __m256d s1 = _mm256_mul_pd(v1, v1);
  const __m256d h = _mm256_hadd_pd(s0, s1);  // z0 z2 z1 z3
  return _mm256_permute4x64_pd(h, 0xD8);     // z0 z1 z2 z3
}

void abs2(const cplx* z, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, abs2_pairs(load2(z + i), load2(z + i + 2)));
  for (; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double row_sum(const double* r, std::size_t ny) {
  double s = 0.5 * (r[0] + r[ny - 1]);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 1;
  for (; j + 4 <= ny - 1; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(r + j));
  double tail = 0.0;
  for (; j + 1 < ny; ++j) tail += r[j];
  return s + (hsum(acc) + tail);
}

double row_sum_abs2(const cplx* r, std::size_t ny) {
  auto m = [](const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); };
  double s = 0.5 * (m(r[0]) + m(r[ny - 1]));
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 1;
  for (; j + 4 <= ny - 1; j += 4) acc = _mm256_add_pd(acc, abs2_pairs(load2(r + j), load2(r + j + 2)));
  double tail = 0.0;
  for (; j + 1 < ny; ++j) tail += m(r[j]);
  return s + (hsum(acc) + tail);
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

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2,   resonant_response, scaled_outer_product, abs2,
                                 trapezoid_2d, abs2_trapezoid_2d};
  return table;
}

}  // namespace lrs::kernels

#else

namespace lrs::kernels {
// Non-x86 build: the dispatcher never selects this table.
const KernelTable& avx2_table() { return scalar_table(); }
}  // namespace lrs::kernels

#endif
