#include <complex>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "lrs/errors.hpp"
#include "lrs/kernels.hpp"

using namespace lrs::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<double> rand_real(std::size_t n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

std::vector<cplx> rand_cplx(std::size_t n, unsigned seed) {
  const auto r = rand_real(2 * n, seed);
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {r[2 * i], r[2 * i + 1]};
  return v;
}

template <class T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& k = scalar_table();
  const cplx num{1.5, -0.5};
  const auto x = rand_real(7, 1);
  std::vector<cplx> out(7);
  k.resonant_response(num, x.data(), 0.25, out.data(), 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(out[i] - num / cplx(x[i], 0.25)) < 1e-15);

  const auto a = rand_cplx(3, 2), b = rand_cplx(4, 3), g = rand_cplx(6, 4);
  std::vector<cplx> op(12);
  k.scaled_outer_product({2.0, 1.0}, a.data(), 3, b.data(), 4, g.data(), op.data());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(op[i * 4 + j] - cplx(2.0, 1.0) * a[i] * b[j] * g[i + j]) < 1e-13);

  std::vector<double> ones(5 * 4, 1.0);
  CHECK(k.trapezoid_2d(ones.data(), 5, 4) == doctest::Approx(4.0 * 3.0));
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!isa_supported(Isa::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  const auto& s = scalar_table();
  const auto& v = avx2_table();
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 64u, 513u}) {
    CAPTURE(n);
    const auto x = rand_real(n, 10 + n);
    std::vector<cplx> o1(n), o2(n);
    s.resonant_response({0.3, -2.0}, x.data(), -1.0, o1.data(), n);
    v.resonant_response({0.3, -2.0}, x.data(), -1.0, o2.data(), n);
    CHECK(bit_equal(o1, o2));

    const auto z = rand_cplx(n, 20 + n);
    std::vector<double> a1(n), a2(n);
    s.abs2(z.data(), a1.data(), n);
    v.abs2(z.data(), a2.data(), n);
    CHECK(bit_equal(a1, a2));

    const std::size_t m = n % 7 + 2;
    const auto a = rand_cplx(m, 30 + n), b = rand_cplx(n, 40 + n), g = rand_cplx(m + n - 1, 50 + n);
    std::vector<cplx> p1(m * n), p2(m * n);
    s.scaled_outer_product({0.7, 0.2}, a.data(), m, b.data(), n, g.data(), p1.data());
    v.scaled_outer_product({0.7, 0.2}, a.data(), m, b.data(), n, g.data(), p2.data());
    CHECK(bit_equal(p1, p2));

    const auto grid = rand_real(m * n, 60 + n);
    CHECK(bit_equal(s.trapezoid_2d(grid.data(), m, n), v.trapezoid_2d(grid.data(), m, n)));
    const auto cgrid = rand_cplx(m * n, 70 + n);
    CHECK(bit_equal(s.abs2_trapezoid_2d(cgrid.data(), m, n), v.abs2_trapezoid_2d(cgrid.data(), m, n)));
  }
}

TEST_CASE("runtime selection") {
  CHECK(parse_isa("scalar") == Isa::Scalar);
  CHECK(parse_isa("avx2") == Isa::Avx2);
  CHECK_THROWS_AS(parse_isa("neon"), lrs::DomainError);
  set_isa(Isa::Scalar);
  CHECK(&active() == &scalar_table());
  if (isa_supported(Isa::Avx2)) {
    set_isa(Isa::Avx2);
    CHECK(&active() == &avx2_table());
  }
  CHECK(std::string(isa_name(Isa::Avx2)) == "avx2");
}
