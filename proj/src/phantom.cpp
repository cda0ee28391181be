#include "lrs/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"

namespace lrs::phantom {
namespace {

constexpr cplx I{0.0, 1.0};

void check_channel(const SystemSpec& system, std::size_t ch) {
  if (ch >= system.channels.size()) throw DomainError("channel index out of range");
}

// v_X (K_X - k) is minus the detuning omega - omega_J.
cplx f_from_D(const SystemSpec& s, std::size_t ch, Band b, double D, Sign sign) {
  const double gbar = s.total_decay_rate(b);
  if (!(gbar > 0.0)) throw DomainError("total decay rate must be positive");
  const cplx gamma = s.coupling_constant(ch, b);
  const cplx den(D, sign == Sign::Plus ? gbar : -gbar);
  return std::conj(gamma) / (std::sqrt(s.ring.circumference()) * den);
}

}  // namespace

EnhancementFactor enhancement_F(const SystemSpec& system, std::size_t channel, Band band, double k,
                                Sign sign) {
  check_channel(system, channel);
  const double D = system.group_velocity(channel, band) * (system.wavenumber(channel, band) - k);
  return {f_from_D(system, channel, band, D, sign), sign, channel, band, k};
}

cplx enhancement_at_detuning(const SystemSpec& system, std::size_t channel, Band band, double detuning,
                             Sign sign) {
  check_channel(system, channel);
  return f_from_D(system, channel, band, -detuning, sign);
}

std::vector<PiecewiseAmplitude> asy_in_amplitude(const SystemSpec& system, std::size_t input, Band band,
                                                 double k) {
  check_channel(system, input);
  const double sqL = std::sqrt(system.ring.circumference());
  const cplx F = enhancement_F(system, input, band, k, Sign::Minus).value;
  std::vector<PiecewiseAmplitude> out;
  const std::size_t n = system.channels.size();
  for (std::size_t y = 0; y < n; ++y) out.push_back({Region::Input, y, y == input ? cplx(1.0) : cplx(0.0)});
  for (std::size_t y = 0; y < n; ++y) {
    const cplx t = I * system.coupling_constant(y, band) * sqL * F / system.group_velocity(y, band);
    out.push_back({Region::Output, y, y == input ? 1.0 + t : t});
  }
  out.push_back({Region::Ring, 0, -F});
  return out;
}

std::vector<PiecewiseAmplitude> asy_out_amplitude(const SystemSpec& system, std::size_t output,
                                                  Band band, double k) {
  check_channel(system, output);
  const double sqL = std::sqrt(system.ring.circumference());
  const cplx F = enhancement_F(system, output, band, k, Sign::Plus).value;
  std::vector<PiecewiseAmplitude> out;
  const std::size_t n = system.channels.size();
  for (std::size_t y = 0; y < n; ++y) {
    const cplx t = -I * system.coupling_constant(y, band) * sqL * F / system.group_velocity(y, band);
    out.push_back({Region::Input, y, y == output ? 1.0 + t : t});
  }
  for (std::size_t y = 0; y < n; ++y) out.push_back({Region::Output, y, y == output ? cplx(1.0) : cplx(0.0)});
  out.push_back({Region::Ring, 0, -F});
  return out;
}

double vacuum_power(double gs, double gi, double ws, double wi, double detuning) {
  if (!(gs > 0.0) || !(gi > 0.0)) throw DomainError("vacuum_power: decay rates must be positive");
  const double sum = gs + gi;
  return 0.5 * constants::hbar * std::sqrt(ws * wi) * gs * gi * sum / (detuning * detuning + sum * sum);
}

double pump_wavevector(const SystemSpec& system, const CwPump& pump) {
  const std::size_t in = system.pump_index();
  return system.wavenumber(in, Band::Pump) +
         (pump.omega - system.bands.pump.omega) / system.group_velocity(in, Band::Pump);
}

double pair_rate_cw(const SystemSpec& system, const CwPump& pump, std::size_t x, std::size_t xp) {
  system.validate();
  pump.validate();
  check_channel(system, x);
  check_channel(system, xp);
  const std::size_t in = system.pump_index();
  const double ws = system.bands.signal.omega, wi = system.bands.idler.omega, wo = pump.omega;
  const double vp = system.group_velocity(in, Band::Pump);
  const double vs = system.group_velocity(x, Band::Signal);
  const double vi = system.group_velocity(xp, Band::Idler);
  const double gl = system.ring.gamma_nl * system.ring.circumference();

  const double pvac = vacuum_power(system.total_decay_rate(Band::Signal), system.total_decay_rate(Band::Idler),
                                   ws, wi, 2.0 * wo - ws - wi);
  const double fp = std::norm(enhancement_F(system, in, Band::Pump, pump_wavevector(system, pump), Sign::Minus).value);
  const double fs = std::norm(enhancement_F(system, x, Band::Signal, system.wavenumber(x, Band::Signal), Sign::Plus).value);
  const double fi = std::norm(enhancement_F(system, xp, Band::Idler, system.wavenumber(xp, Band::Idler), Sign::Plus).value);

  return (std::sqrt(ws * wi) / wo) * (vp * vp / (vs * vi)) * gl * gl * pump.power * pump.power * pvac /
         (constants::hbar * wo) * fp * fp * fs * fi;
}

std::size_t RateMatrix::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return i;
  throw DomainError("unknown channel '" + id + "' in rate matrix");
}

RateMatrix rate_matrix(const SystemSpec& system, const CwPump& pump) {
  system.validate();
  RateMatrix m;
  const std::size_t n = system.channels.size();
  for (const auto& ch : system.channels) m.ids.push_back(ch.id);
  m.entries.resize(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t xp = 0; xp < n; ++xp) m.entries[x * n + xp] = pair_rate_cw(system, pump, x, xp);
  const double ws = system.bands.signal.omega, wi = system.bands.idler.omega;
  m.p_vac = vacuum_power(system.total_decay_rate(Band::Signal), system.total_decay_rate(Band::Idler), ws, wi,
                         2.0 * pump.omega - ws - wi);
  for (Band b : kAllBands) {
    const auto q = q_and_eta(system, b);
    m.eta[b] = q.eta;
  }
  return m;
}

double rate_ratio(const RateMatrix& m, std::size_t x, std::size_t xp, std::size_t y, std::size_t yp) {
  const double den = m.at(y, yp);
  if (den == 0.0) throw DomainError("rate_ratio: denominator rate is zero");
  return m.at(x, xp) / den;
}

double predicted_ratio(const SystemSpec& system, std::size_t x, std::size_t xp, std::size_t y,
                       std::size_t yp) {
  const double num = system.escape_efficiency(x, Band::Signal) * system.escape_efficiency(xp, Band::Idler);
  const double den = system.escape_efficiency(y, Band::Signal) * system.escape_efficiency(yp, Band::Idler);
  if (den == 0.0) throw DomainError("predicted_ratio: denominator efficiency is zero");
  return num / den;
}

cplx coupling_kernel(const SystemSpec& system, std::size_t x, std::size_t xp, double k1, double k2,
                     double k3, double k4) {
  using namespace constants;
  const std::size_t in = system.pump_index();
  const double vp = system.group_velocity(in, Band::Pump);
  const double pref = hbar * hbar * epsilon0 * vp * vp / (12.0 * pi * pi) *
                      std::sqrt(system.bands.signal.omega * system.bands.idler.omega) * system.ring.gamma_nl *
                      system.ring.circumference();
  const cplx fs = enhancement_F(system, x, Band::Signal, k1, Sign::Plus).value;
  const cplx fi = enhancement_F(system, xp, Band::Idler, k2, Sign::Plus).value;
  const cplx f3 = enhancement_F(system, in, Band::Pump, k3, Sign::Minus).value;
  const cplx f4 = enhancement_F(system, in, Band::Pump, k4, Sign::Minus).value;
  return pref * std::conj(fs) * std::conj(fi) * f3 * f4;
}

OracleResult fgr_rate_oracle(const SystemSpec& system, const CwPump& pump, std::size_t x, std::size_t xp,
                             double rel_tol) {
  using namespace constants;
  system.validate();
  pump.validate();
  check_channel(system, x);
  check_channel(system, xp);
  const auto ds = system.dispersion(x, Band::Signal);
  const auto di = system.dispersion(xp, Band::Idler);
  const std::size_t in = system.pump_index();
  const double vp = system.group_velocity(in, Band::Pump);
  const double wo = pump.omega;
  const double ko = pump_wavevector(system, pump);

  // d = omega1 - omega_S, omega2 = 2 omega_o - omega1
  auto integrand = [&](double d) {
    const double w1 = ds.omega + d;
    const double w2 = 2.0 * wo - w1;
    return std::norm(coupling_kernel(system, x, xp, ds.k_at(w1), di.k_at(w2), ko, ko));
  };
  const double scale = system.total_decay_rate(Band::Signal);
  const std::array<double, 1> peaks{2.0 * wo - di.omega - ds.omega};
  QuadratureOptions q;
  q.rel_tol = rel_tol;
  q.initial_panels = 4;
  const auto res = integrate_real_line(integrand, 0.0, scale, std::span<const double>(peaks), q);

  const double pref = 72.0 * pi * pi * pi / (epsilon0 * epsilon0 * std::pow(hbar, 4) * wo * wo) * pump.power *
                      pump.power / (ds.group_velocity * di.group_velocity * vp * vp);
  return {pref * res.value, pref * res.abs_error, res.evaluations};
}

}  // namespace lrs::phantom
