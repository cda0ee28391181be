#include "lrs/attenuation.hpp"

#include <algorithm>
#include <cmath>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"

namespace lrs::attenuation {
namespace {

constexpr cplx I{0.0, 1.0};

void check_pole(cplx den, const char* what) {
  if (std::abs(den) < 1e-14) throw SingularityError(std::string(what) + ": resonant pole (lossless, sigma = 1)");
}

}  // namespace

PointCoupler PointCoupler::from_sigma(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("self-coupling sigma must lie in [0, 1]");
  return {sigma, std::sqrt((1.0 - sigma) * (1.0 + sigma))};
}

void PointCoupler::validate() const {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("self-coupling sigma must lie in [0, 1]");
  if (std::abs(sigma * sigma + kappa * kappa - 1.0) > 1e-12) {
    throw DomainError("coupler is not lossless: sigma^2 + kappa^2 != 1");
  }
}

std::pair<cplx, cplx> coupler_scatter(const PointCoupler& c, cplx f1, cplx f4) {
  return {c.sigma * f1 + I * c.kappa * f4, I * c.kappa * f1 + c.sigma * f4};
}

RingFieldAmps asy_fields(double sigma, const ComplexWavevector& q, double length) {
  const auto c = PointCoupler::from_sigma(sigma);
  if (!(length > 0.0)) throw DomainError("ring length must be positive");
  const cplx e = std::exp(I * q.q * length);
  if (q.regime == Regime::In) {
    const cplx den = 1.0 - sigma * e;
    check_pole(den, "asy_fields");
    return {I * c.kappa / den, (sigma - e) / den, Regime::In};
  }
  const cplx den = sigma - e;
  check_pole(den, "asy_fields");
  return {I * c.kappa / den, (1.0 - sigma * e) / den, Regime::Out};
}

AddDropFields add_drop_fields(double sigma1, double sigma2, const ComplexWavevector& q, double length,
                              std::size_t out_port) {
  const auto c1 = PointCoupler::from_sigma(sigma1);
  const auto c2 = PointCoupler::from_sigma(sigma2);
  if (!(length > 0.0)) throw DomainError("ring length must be positive");
  const double k1 = c1.kappa, k2 = c2.kappa;
  const cplx e = std::exp(I * q.q * length);
  const cplx h = std::exp(I * q.q * (0.5 * length));  // half round trip, coupler spacing L/2

  AddDropFields f;
  f.regime = q.regime;
  if (q.regime == Regime::In) {
    const cplx den = 1.0 - sigma1 * sigma2 * e;
    check_pole(den, "add_drop_fields");
    const cplx r0 = I * k1 / den;
    f.ring = {r0, sigma2 * r0};
    f.through = (sigma1 - sigma2 * e) / den;
    f.drop = -k1 * k2 * h / den;
    return f;
  }

  const cplx den = sigma1 * sigma2 - e;
  check_pole(den, "add_drop_fields");
  if (out_port == 0) {
    f.ring = {I * k1 * sigma2 / den, I * k1 / den};
    f.through = (sigma2 - sigma1 * e) / den;
    f.drop = k1 * k2 * h / den;
  } else if (out_port == 1) {
    const cplx r0 = I * k2 * h / den;
    f.ring = {r0, sigma1 * r0 / e};
    f.through = k1 * k2 * h / den;
    f.drop = (sigma1 - sigma2 * e) / den;
  } else {
    throw DomainError("add_drop_fields: out_port must be 0 (through) or 1 (drop)");
  }
  return f;
}

cplx phase_integral(cplx d, double a, double len) {
  const cplx x = d * len;
  const cplx start = std::exp(I * d * a);
  if (std::abs(x) < 1e-6) return start * len * (1.0 + I * x / 2.0 - x * x / 6.0);
  return start * (std::exp(I * x) - 1.0) / (I * d);
}

cplx overlap_J(const RingProfile& s, const RingProfile& i, const RingProfile& p3, const RingProfile& p4,
               double length, double delta_kappa) {
  const cplx d = p3.q + p4.q - std::conj(s.q) - std::conj(i.q) + delta_kappa;
  const double half = 0.5 * length;
  cplx total{};
  for (int h = 0; h < 2; ++h) {
    const cplx amp = std::conj(s.c[h] * i.c[h]) * p3.c[h] * p4.c[h];
    if (amp == cplx{}) continue;
    total += amp * phase_integral(d, h * half, half);
  }
  return total;
}

// ---------------------------------------------------------------------------

AttenuationModel AttenuationModel::from_system(const SystemSpec& system) {
  system.validate();
  AttenuationModel m;
  m.ring = system.ring;
  m.bands = system.bands;
  m.xi = system.ring.attenuation();
  const double L = system.ring.circumference();

  std::vector<std::size_t> order{system.pump_index()};
  for (std::size_t idx : system.physical_indices()) {
    if (idx != order.front()) order.push_back(idx);
  }
  if (order.size() > 2) {
    throw DomainError("the attenuation strategy supports at most two physical couplers");
  }
  for (std::size_t idx : order) {
    m.ids.push_back(system.channels[idx].id);
    PerBand<double> s;
    for (Band b : kAllBands) {
      s[b] = sigma_from_gamma(system.channels[idx].decay_rate[b], system.bands[b].group_velocity, L);
    }
    m.sigma.push_back(s);
  }
  return m;
}

AttenuationModel AttenuationModel::ring_channel(const RingSpec& ring, const PerBand<BandParams>& bands,
                                                double sigma, std::string id) {
  AttenuationModel m;
  m.ring = ring;
  m.bands = bands;
  m.xi = ring.attenuation();
  m.ids = {std::move(id)};
  m.sigma = {PerBand<double>{sigma, sigma, sigma}};
  m.validate();
  return m;
}

std::size_t AttenuationModel::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return i;
  throw DomainError("unknown channel '" + id + "' in attenuation model");
}

void AttenuationModel::validate() const {
  ring.validate();
  for (Band b : kAllBands) bands[b].validate();
  if (ids.empty() || ids.size() > 2 || sigma.size() != ids.size()) {
    throw DomainError("attenuation model needs one or two couplers");
  }
  for (const auto& s : sigma)
    for (Band b : kAllBands) PointCoupler::from_sigma(s[b]);
  if (!(xi >= 0.0)) throw DomainError("attenuation must be non-negative");
}

RingProfile AttenuationModel::in_profile(Band b, double omega) const {
  const double dq = (omega - bands[b].omega) / bands[b].group_velocity;
  const auto q = ComplexWavevector::in(dq, xi);
  if (ids.size() == 1) {
    const auto f = asy_fields(sigma[0][b], q, length());
    return {{f.f_ring, f.f_ring}, q.q};
  }
  const auto f = add_drop_fields(sigma[0][b], sigma[1][b], q, length());
  return {f.ring, q.q};
}

RingProfile AttenuationModel::out_profile(Band b, double omega, std::size_t port) const {
  if (port >= ids.size()) throw DomainError("attenuation model: output port out of range");
  const double dq = (omega - bands[b].omega) / bands[b].group_velocity;
  const auto q = ComplexWavevector::out(dq, xi);
  if (ids.size() == 1) {
    const auto f = asy_fields(sigma[0][b], q, length());
    return {{f.f_ring, f.f_ring}, q.q};
  }
  const auto f = add_drop_fields(sigma[0][b], sigma[1][b], q, length(), port);
  return {f.ring, q.q};
}

double AttenuationModel::loaded_roundtrip(Band b) const {
  double rho = lrs::roundtrip_amplitude(xi, length());
  for (const auto& s : sigma) rho *= s[b];
  return rho;
}

double AttenuationModel::linewidth(Band b) const {
  const double v = bands[b].group_velocity;
  const double fsr = 2.0 * constants::pi * v / length();
  const double rho = loaded_roundtrip(b);
  if (!(rho > 0.0)) return fsr;
  const double s = (1.0 - rho) / (2.0 * std::sqrt(rho));
  if (s >= 1.0) return fsr;
  const double half_width_phase = 2.0 * std::asin(s);
  return std::min(fsr, 2.0 * half_width_phase * v / length());
}

cplx overlap_at(const AttenuationModel& m, double omega1, double omega_pump, std::size_t signal_port,
                std::size_t idler_port) {
  const double omega2 = 2.0 * omega_pump - omega1;
  const auto s = m.out_profile(Band::Signal, omega1, signal_port);
  const auto i = m.out_profile(Band::Idler, omega2, idler_port);
  const auto p = m.in_profile(Band::Pump, omega_pump);
  return overlap_J(s, i, p, p, m.length(), m.ring.delta_kappa);
}

RateResult pair_rate_cw(const AttenuationModel& m, const CwPump& pump, std::size_t signal_port,
                        std::size_t idler_port, const RateOptions& opts) {
  m.validate();
  pump.validate();
  if (!(opts.window_linewidths > 0.0)) throw DomainError("quadrature window must be positive");
  const auto& bp = m.bands.pump;
  const auto& bs = m.bands.signal;
  const auto& bi = m.bands.idler;
  const double wo = pump.omega;

  const double lw = std::max(m.linewidth(Band::Signal), m.linewidth(Band::Idler));
  const double fsr = 2.0 * constants::pi * bs.group_velocity / m.length();
  const double half = std::min(opts.window_linewidths * lw, 0.5 * fsr);

  // integrate over d = w1 - w_S; idler resonance sits at d = 2 w_o - w_I - w_S
  std::vector<double> breaks{-half, half};
  const double idler_peak = 2.0 * wo - bi.omega - bs.omega;
  for (double peak : {0.0, idler_peak}) {
    for (double off : {0.0, -0.5, 0.5, -2.0, 2.0, -8.0, 8.0}) {
      const double x = peak + off * lw;
      if (x > -half && x < half) breaks.push_back(x);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double a, double b) { return std::abs(a - b) < 1e-9 * lw; }),
               breaks.end());

  auto integrand = [&](double d) {
    const double w1 = bs.omega + d;
    const double w2 = 2.0 * wo - w1;
    return w1 * w2 * std::norm(overlap_at(m, w1, wo, signal_port, idler_port));
  };
  QuadratureOptions q;
  q.rel_tol = opts.rel_tol;
  const auto res = integrate_adaptive(integrand, std::span<const double>(breaks), q);

  const double g = m.ring.gamma_nl * pump.power / bp.omega;
  const double pref = g * g * bp.group_velocity * bp.group_velocity /
                      (2.0 * constants::pi * bs.group_velocity * bi.group_velocity);
  return {pref * res.value, pref * res.abs_error, res.evaluations};
}

}  // namespace lrs::attenuation
