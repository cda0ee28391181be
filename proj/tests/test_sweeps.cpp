#include <cmath>

#include "doctest.h"
#include "lrs/errors.hpp"
#include "lrs/numerics.hpp"
#include "lrs/sweeps.hpp"
#include "test_util.hpp"

using namespace lrs;
using namespace lrs::sweeps;

namespace {

const CwPump kPump{1e-3, test::omega_1550()};

SystemSpec add_drop() {
  SystemSpec s = test::reference_system();
  s.channels[0].id = "T";
  auto d = s.channels[0];
  d.id = "D";
  s.channels.insert(s.channels.begin() + 1, d);
  s.pump_channel = "T";
  return s;
}

}  // namespace

TEST_CASE("sigma sweep peaks on the over-coupled side") {
  const auto m = attenuation::AttenuationModel::ring_channel(test::reference_ring(), test::equal_bands(), 0.98);
  const auto r = sweep_sigma(m, kPump, linspace(0.9, 1.0, 101));
  CHECK(r.points() == 101);
  CHECK(r.summary_value("sigma_max") < r.summary_value("a"));
  CHECK(r.column("R_OO").values.back() == 0.0);
  // sigma -> eta mapping puts the peak near 4/7
  CHECK(r.summary_value("eta_at_sigma_max") == doctest::Approx(4.0 / 7.0).epsilon(0.02));
}

TEST_CASE("eta sweep") {
  const auto r = sweep_eta(test::reference_system(), kPump, linspace(0.005, 0.995, 101));
  CHECK(r.summary_value("eta_max") == doctest::Approx(4.0 / 7.0).epsilon(0.01 / (4.0 / 7.0)));
  CHECK(r.summary_value("max_ratio_error") < 1e-12);
  const auto& oo = r.column("R_OO").values;
  const auto& op = r.column("R_OP").values;
  const auto& po = r.column("R_PO").values;
  const auto& pp = r.column("R_PP").values;
  // curves cross at eta = 0.5 (grid point 50)
  CHECK(std::abs(oo[50] - pp[50]) <= 1e-12 * oo[50]);
  CHECK(std::abs(oo[50] - op[50]) <= 1e-12 * oo[50]);
  for (std::size_t i = 0; i < 101; ++i) CHECK(op[i] == doctest::Approx(po[i]).epsilon(1e-14));
  // toward eta = 1 only R_OO survives
  CHECK(pp.back() / oo.back() < 1e-4);
  // R_OO ~ eta^4 (1 - eta)^3
  const auto& eta = r.axes[0];
  const double c0 = oo[30] / (std::pow(eta[30], 4) * std::pow(1 - eta[30], 3));
  for (std::size_t i = 0; i < 101; i += 10)
    CHECK(oo[i] == doctest::Approx(c0 * std::pow(eta[i], 4) * std::pow(1 - eta[i], 3)).epsilon(1e-10));
  CHECK_THROWS_AS(sweep_eta(test::reference_system(), kPump, {0.5, 1.0}), DomainError);
}

TEST_CASE("strategies converge with finesse") {
  const auto r = compare_finesse(test::reference_system(), kPump, {20.0, 50.0, 84.0, 200.0, 1000.0, 3000.0});
  const auto& d = r.column("rel_diff").values;
  CHECK(std::abs(d[2]) <= 0.15);
  CHECK(std::abs(d[4]) <= 0.01);
  CHECK(std::abs(d[5]) <= 0.01);
  CHECK(r.summary_value("monotone_beyond_50") == 1.0);
  // the requested finesse is what the phantom system has
  const auto& sig = r.column("sigma").values;
  CHECK(sig[2] > 0.9);
}

TEST_CASE("add-drop finesse comparison") {
  const auto r = compare_finesse_add_drop(add_drop(), kPump, 0.9814, linspace(0.3, 1.0, 15));
  const auto& tt = r.column("rel_diff_R_TT").values;
  CHECK(std::abs(tt.back()) < 0.01);
  CHECK(r.column("R_DD_phantom").values.back() == 0.0);
  CHECK(r.column("R_DD_attenuation").values.back() == 0.0);
  // finesse rises with sigma2
  const auto& f = r.column("finesse").values;
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] > f[i - 1]);
}

TEST_CASE("add-drop grid") {
  const auto axis = logspace(0.05, 5.0, 41);
  const auto r = add_drop_grid(add_drop(), kPump, axis, axis);
  CHECK(r.points() == 41 * 41);
  CHECK(r.matrices.size() == 41 * 41);
  CHECK(r.summary_value("max_ratio_error") < 1e-12);
  // stationary point of t^2 d^2 / (1 + t + d)^7
  CHECK(r.summary_value("argmax_T_R_DD") == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(r.summary_value("argmax_D_R_DD") == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  const auto& dd = r.column("R_DD").values;
  const auto& td = r.column("R_TD").values;
  const auto& dt = r.column("R_DT").values;
  for (std::size_t k = 0; k < dd.size(); ++k) CHECK(td[k] == doctest::Approx(dt[k]).epsilon(1e-14));
  // fixed Gamma_T slice: drop rates rise then fall with Gamma_D
  std::size_t row = 0;
  while (axis[row] < 1.5) ++row;
  std::vector<double> slice(axis.size());
  for (std::size_t j = 0; j < axis.size(); ++j) slice[j] = dd[row * axis.size() + j];
  const auto peak = std::max_element(slice.begin(), slice.end()) - slice.begin();
  CHECK(peak > 0);
  CHECK(peak < static_cast<long>(axis.size()) - 1);
}

TEST_CASE("no drop coupling, no drop rates") {
  auto s = add_drop();
  s.channels[1].decay_rate = {0, 0, 0};
  const auto m = phantom::rate_matrix(s, kPump);
  for (std::size_t x = 0; x < 3; ++x) {
    CHECK(m.at(1, x) == 0.0);
    CHECK(m.at(x, 1) == 0.0);
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepOptions one, many;
  many.threads = 5;
  const auto etas = linspace(0.01, 0.99, 37);
  const auto a = sweep_eta(test::reference_system(), kPump, etas, one);
  const auto b = sweep_eta(test::reference_system(), kPump, etas, many);
  for (std::size_t c = 0; c < a.columns.size(); ++c) CHECK(a.columns[c].values == b.columns[c].values);
  const auto m = attenuation::AttenuationModel::ring_channel(test::reference_ring(), test::equal_bands(), 0.98);
  const auto s1 = sweep_sigma(m, kPump, linspace(0.95, 1.0, 23), one);
  const auto s2 = sweep_sigma(m, kPump, linspace(0.95, 1.0, 23), many);
  CHECK(s1.column("R_OO").values == s2.column("R_OO").values);
}

TEST_CASE("random systems are valid and reproducible") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [s, p] = random_system(seed);
    CHECK_NOTHROW(s.validate());
    CHECK(s.phantom_index().has_value());
    CHECK(random_system(seed).first == s);
  }
}

TEST_CASE("sweep result validation") {
  SweepResult r;
  r.kind = "x";
  r.axes = {{0.0, 1.0, 1.0}};
  r.columns = {{"x", {0.0, 1.0, 1.0}}};
  CHECK_THROWS_AS(r.validate(), DomainError);
  r.axes = {{0.0, 1.0, 2.0}};
  r.columns.push_back({"y", {1.0}});
  CHECK_THROWS_AS(r.validate(), DomainError);
}
