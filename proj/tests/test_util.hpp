// Shared fixtures for the unit tests.
#pragma once

#include <cmath>

#include "lrs/constants.hpp"
#include "lrs/model.hpp"

namespace lrs::test {

inline double omega_1550() { return 2.0 * constants::pi * constants::speed_of_light / 1550e-9; }

inline PerBand<BandParams> equal_bands(double v = 1e8) {
  const double w = omega_1550();
  PerBand<BandParams> b;
  for (Band x : kAllBands) b[x] = {x, w, v, 2.4 * w / constants::speed_of_light};
  return b;
}

inline RingSpec reference_ring() { return {10e-6, 26.0, 100.0, 0.0}; }

// One bus "O" plus phantom "P" with the given per-band rates.
inline SystemSpec ring_channel(double gamma_o, double gamma_p) {
  SystemSpec s;
  s.ring = reference_ring();
  s.bands = equal_bands();
  ChannelCoupling o;
  o.id = "O";
  o.decay_rate = {gamma_o, gamma_o, gamma_o};
  ChannelCoupling p;
  p.id = "P";
  p.kind = ChannelKind::Phantom;
  p.decay_rate = {gamma_p, gamma_p, gamma_p};
  s.channels = {o, p};
  s.pump_channel = "O";
  return s;
}

// Q_coupling = Q_int = 2e4.
inline SystemSpec reference_system() {
  const double g = omega_1550() / 4e4;
  return ring_channel(g, g);
}

inline SystemSpec with_eta(double eta) {
  const double gp = omega_1550() / 4e4;
  return ring_channel(eta / (1.0 - eta) * gp, gp);
}

inline double relerr(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace lrs::test
