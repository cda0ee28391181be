#include <cmath>
#include <random>

#include "doctest.h"
#include "lrs/attenuation.hpp"
#include "lrs/errors.hpp"
#include "lrs/phantom.hpp"
#include "test_util.hpp"

using namespace lrs;
using namespace lrs::attenuation;

namespace {
const double L = 2 * constants::pi * 10e-6;
}

TEST_CASE("point coupler is lossless") {
  for (double s : {0.1, 0.5, 0.9814, 1.0}) {
    const auto c = PointCoupler::from_sigma(s);
    CHECK(c.sigma * c.sigma + c.kappa * c.kappa == doctest::Approx(1.0).epsilon(1e-15));
    const cplx f1{0.3, 0.4}, f4{-0.2, 0.9};
    const auto [f2, f3] = coupler_scatter(c, f1, f4);
    CHECK(std::norm(f2) + std::norm(f3) == doctest::Approx(std::norm(f1) + std::norm(f4)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(PointCoupler::from_sigma(1.2), DomainError);
}

TEST_CASE("all-pass ring without loss conserves flux") {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-1e5, 1e5);
  for (int i = 0; i < 50; ++i) {
    const auto f = asy_fields(0.95, ComplexWavevector::in(u(g), 0.0), L);
    CHECK(std::norm(f.f_through) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("critical coupling extinguishes the through port on resonance") {
  const double xi = test::reference_ring().attenuation();
  const double a = std::exp(-0.5 * xi * L);
  const auto f = asy_fields(a, ComplexWavevector::in(0.0, xi), L);
  CHECK(std::abs(f.f_through) < 1e-12);
  const auto off = asy_fields(0.9, ComplexWavevector::in(0.0, xi), L);
  CHECK(std::norm(off.f_through) < 1.0);
}

TEST_CASE("lossless resonance of a closed ring is a pole") {
  CHECK_THROWS_AS(asy_fields(1.0, ComplexWavevector::in(0.0, 0.0), L), SingularityError);
}

TEST_CASE("add-drop: lossless flux and the all-pass limit") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-2e5, 2e5);
  for (int i = 0; i < 50; ++i) {
    const double q = u(g);
    const auto f = add_drop_fields(0.97, 0.9, ComplexWavevector::in(q, 0.0), L);
    CHECK(std::norm(f.through) + std::norm(f.drop) == doctest::Approx(1.0).epsilon(1e-12));
    const auto ap = add_drop_fields(0.97, 1.0, ComplexWavevector::in(q, 1.0), L);
    const auto ref = asy_fields(0.97, ComplexWavevector::in(q, 1.0), L);
    CHECK(std::abs(ap.through - ref.f_through) < 1e-12);
    CHECK(std::abs(ap.drop) == 0.0);
  }
}

TEST_CASE("out-fields are the time reverse of in-fields") {
  // With no loss, the out-mode amplitudes are the conjugates of the in-mode ones.
  const double q = 3.3e4;
  const auto in = asy_fields(0.9, ComplexWavevector::in(q, 0.0), L);
  const auto out = asy_fields(0.9, ComplexWavevector::out(q, 0.0), L);
  CHECK(std::abs(out.f_through - std::conj(in.f_through)) < 1e-12);
}

TEST_CASE("phase integral series branch is continuous") {
  const double len = L / 2;
  for (double d : {1e-3, 1e-1, 10.0}) {
    const cplx small = phase_integral(cplx(d * 1e-9 / len, 0), 0.2 * L, len);
    // e^{iq x0} (e^{iq len} - 1) / (iq), with the difference written cancellation-free
    const double q = d * 1e-9 / len, th = q * len;
    const cplx em1(-2.0 * std::sin(th / 2) * std::sin(th / 2), std::sin(th));
    const cplx exact = std::exp(cplx(0, q * 0.2 * L)) * em1 / cplx(0, q);
    CHECK(std::abs(small - exact) / len < 1e-9);
  }
  CHECK(std::abs(phase_integral(0.0, 0.0, len) - len) < 1e-18);
}

TEST_CASE("attenuation-strategy rates") {
  const auto bands = test::equal_bands();
  const CwPump pump{1e-3, test::omega_1550()};
  const RingSpec ring = test::reference_ring();

  SUBCASE("decoupled ring generates nothing") {
    const auto m = AttenuationModel::ring_channel(ring, bands, 1.0);
    CHECK(pair_rate_cw(m, pump, 0, 0).value == 0.0);
  }
  SUBCASE("close to the phantom result at the reference parameters") {
    const double a = ring.roundtrip_amplitude();
    const auto m = AttenuationModel::ring_channel(ring, bands, a);
    const auto r = pair_rate_cw(m, pump, 0, 0);
    CHECK(r.abs_error <= 1e-6 * r.value);
    const double v = 1e8;
    const auto s = test::ring_channel(gamma_from_sigma(a, v, L), phantom_gamma_from_xi(ring.attenuation(), v));
    const double r2 = phantom::pair_rate_cw(s, pump, 0, 0);
    CHECK(std::abs(r.value - r2) / r2 < 0.15);
  }
  SUBCASE("add-drop with a decoupled drop equals the all-pass ring") {
    AttenuationModel ad;
    ad.ring = ring;
    ad.bands = bands;
    ad.xi = ring.attenuation();
    ad.ids = {"T", "D"};
    ad.sigma = {{0.98, 0.98, 0.98}, {1.0, 1.0, 1.0}};
    const auto ap = AttenuationModel::ring_channel(ring, bands, 0.98);
    CHECK(pair_rate_cw(ad, pump, 0, 0).value == doctest::Approx(pair_rate_cw(ap, pump, 0, 0).value).epsilon(1e-6));
    CHECK(pair_rate_cw(ad, pump, 1, 1).value == 0.0);
    CHECK(pair_rate_cw(ad, pump, 0, 1).value == 0.0);
  }
  SUBCASE("symmetric bands give symmetric cross rates") {
    AttenuationModel ad;
    ad.ring = ring;
    ad.bands = bands;
    ad.xi = ring.attenuation();
    ad.ids = {"T", "D"};
    ad.sigma = {{0.98, 0.98, 0.98}, {0.95, 0.95, 0.95}};
    CHECK(pair_rate_cw(ad, pump, 0, 1).value == doctest::Approx(pair_rate_cw(ad, pump, 1, 0).value).epsilon(1e-6));
  }
}

TEST_CASE("from_system keeps the physical couplers only") {
  SystemSpec s = test::reference_system();
  const auto m = AttenuationModel::from_system(s);
  REQUIRE(m.ids.size() == 1);
  CHECK(m.ids[0] == "O");
  CHECK(m.sigma[0].pump == doctest::Approx(1.0 - s.channels[0].decay_rate.pump * L / 1e8));
  for (const char* id : {"A", "B"}) {
    auto c = s.channels[0];
    c.id = id;
    s.channels.push_back(c);
  }
  CHECK_THROWS_AS(AttenuationModel::from_system(s), DomainError);
}

TEST_CASE("linewidth approaches 2 Gamma_bar at high finesse") {
  const RingSpec ring{10e-6, 0.5, 100.0, 0.0};
  const auto m = AttenuationModel::ring_channel(ring, test::equal_bands(), 0.998);
  const double gbar = gamma_from_sigma(0.998, 1e8, L) + phantom_gamma_from_xi(ring.attenuation(), 1e8);
  CHECK(m.linewidth(Band::Pump) == doctest::Approx(2 * gbar).epsilon(2e-3));
}
