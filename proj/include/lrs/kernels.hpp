/**
 * Batched inner loops behind a runtime-selected implementation.
 *
 * The scalar table is the reference; the AVX2 table performs the same
 * operations in the same order and must match it bit for bit
 * (tests/test_kernels.cpp).  Selection order: explicit
 * set_isa() call, then LRS_SIMD=scalar|avx2 in the environment, then CPU
 * detection.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace lrs::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  /// out[i] = numerator / (x[i] + i*y)
  void (*resonant_response)(cplx numerator, const double* x, double y, cplx* out, std::size_t n);
  /// out[i*nb + j] = scale * a[i] * b[j] * g[i + j]    (g has na + nb - 1 entries)
  void (*scaled_outer_product)(cplx scale, const cplx* a, std::size_t na, const cplx* b,
                               std::size_t nb, const cplx* g, cplx* out);
  /// out[i] = |z[i]|^2
  void (*abs2)(const cplx* z, double* out, std::size_t n);
  /// Trapezoid weights with unit spacing, summed row by row.
  double (*trapezoid_2d)(const double* v, std::size_t nx, std::size_t ny);
  double (*abs2_trapezoid_2d)(const cplx* v, std::size_t nx, std::size_t ny);
};

const KernelTable& scalar_table();
/// Only meaningful when the CPU supports AVX2; see isa_supported().
const KernelTable& avx2_table();

bool isa_supported(Isa isa);
const KernelTable& active();
/// Throws DomainError if the CPU lacks the instruction set.
void set_isa(Isa isa);
Isa parse_isa(const std::string& name);
const char* isa_name(Isa isa);

}  // namespace lrs::kernels
