#include <cmath>

#include "doctest.h"
#include "lrs/errors.hpp"
#include "lrs/model.hpp"
#include "test_util.hpp"

using namespace lrs;
using lrs::test::relerr;

TEST_CASE("loss bookkeeping from 26 dB/cm") {
  const RingSpec ring = test::reference_ring();
  const double xi = ring.attenuation();
  CHECK(xi == doctest::Approx(26.0 * 100.0 * std::log(10.0) / 10.0).epsilon(1e-15));
  CHECK(relerr(ring.roundtrip_amplitude(), 0.9814) < 1e-3);
  const double w = test::omega_1550();
  const double q_int = q_from_gamma(w, phantom_gamma_from_xi(xi, 1e8));
  CHECK(relerr(q_int, 2e4) < 0.03);
  CHECK(db_per_cm_from_xi(xi) == doctest::Approx(26.0).epsilon(1e-14));
}

TEST_CASE("sigma and Gamma convert both ways") {
  const double L = 2 * constants::pi * 10e-6, v = 1e8;
  for (double s : {0.3, 0.9, 0.9814, 1.0}) CHECK(sigma_from_gamma(gamma_from_sigma(s, v, L), v, L) == doctest::Approx(s));
  CHECK(gamma_from_sigma(1.0, v, L) == 0.0);
  CHECK_THROWS_AS(sigma_from_gamma(2.0 * v / L, v, L), DomainError);
  CHECK_THROWS_AS(gamma_from_sigma(1.5, v, L), DomainError);
}

TEST_CASE("Q conversions") {
  const double w = test::omega_1550();
  CHECK(q_from_gamma(w, gamma_from_q(w, 1.234e4)) == doctest::Approx(1.234e4));
  CHECK(std::isinf(q_from_gamma(w, 0.0)));
  CHECK_THROWS_AS(gamma_from_q(w, 0.0), DomainError);
}

TEST_CASE("quality report at critical coupling") {
  const SystemSpec s = test::reference_system();
  const auto q = q_and_eta(s, Band::Pump);
  CHECK(q.q_loaded == doctest::Approx(1e4));
  REQUIRE(q.eta.size() == 2);
  CHECK(q.eta[0] == doctest::Approx(0.5));
  CHECK(q.eta[0] + q.eta[1] == doctest::Approx(1.0));
  CHECK(finesse(s) == doctest::Approx(2 * constants::pi * 1e8 / (2 * constants::pi * 10e-6) / (2 * q.total_decay_rate)));
}

TEST_CASE("coupling constant carries |gamma|^2 = 2 v Gamma and its phase") {
  SystemSpec s = test::reference_system();
  s.channels[0].coupling_phase = 0.7;
  const auto g = s.coupling_constant(0, Band::Signal);
  CHECK(std::norm(g) == doctest::Approx(2 * 1e8 * s.channels[0].decay_rate.signal));
  CHECK(std::arg(g) == doctest::Approx(0.7));
}

TEST_CASE("channel overrides of velocity and wavenumber") {
  SystemSpec s = test::reference_system();
  s.channels[1].group_velocity.idler = 1.5e8;
  CHECK(s.group_velocity(1, Band::Idler) == 1.5e8);
  CHECK(s.group_velocity(0, Band::Idler) == 1e8);
  const auto d = s.dispersion(1, Band::Idler);
  CHECK(d.omega_at(d.k_at(d.omega + 3e9)) == doctest::Approx(d.omega + 3e9));
}

TEST_CASE("validation rejects broken systems") {
  SystemSpec s = test::reference_system();
  SUBCASE("no channels") {
    s.channels.clear();
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
  SUBCASE("negative rate") {
    s.channels[0].decay_rate.pump = -1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
  SUBCASE("unknown pump channel") {
    s.pump_channel = "X";
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
  SUBCASE("pump on the phantom") {
    s.pump_channel = "P";
    CHECK_THROWS(s.validate());
  }
  SUBCASE("duplicate ids") {
    s.channels[1].id = "O";
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
}

TEST_CASE("pulse bandwidth") {
  PulsedPump p{10e-12, test::omega_1550(), 1.0};
  CHECK(p.bandwidth() == doctest::Approx(4 * std::log(2.0) / 10e-12));
  p.duration_fwhm = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}
