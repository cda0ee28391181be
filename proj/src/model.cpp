#include "lrs/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"

namespace lrs {

const char* band_name(Band band) noexcept {
  switch (band) {
    case Band::Pump: return "pump";
    case Band::Signal: return "signal";
    default: return "idler";
  }
}

void BandParams::validate() const {
  if (!(omega > 0.0) || !(group_velocity > 0.0) || !(wavenumber > 0.0)) {
    throw DomainError(std::string(band_name(label)) +
                      " band: omega, group velocity and wavenumber must be positive");
  }
}

double RingSpec::circumference() const noexcept { return 2.0 * constants::pi * radius; }

double RingSpec::attenuation() const { return xi_from_db_per_cm(loss_db_per_cm); }

double RingSpec::roundtrip_amplitude() const {
  return lrs::roundtrip_amplitude(attenuation(), circumference());
}

void RingSpec::validate() const {
  if (!(radius > 0.0)) throw DomainError("ring radius must be positive");
  if (!(loss_db_per_cm >= 0.0)) throw DomainError("ring loss must be non-negative");
  if (!(gamma_nl >= 0.0)) throw DomainError("nonlinear parameter must be non-negative");
  if (!std::isfinite(delta_kappa)) throw DomainError("delta_kappa must be finite");
}

void SystemSpec::validate() const {
  ring.validate();
  for (Band b : kAllBands) {
    if (bands[b].label != b) throw DomainError("band labels out of order");
    bands[b].validate();
  }
  if (channels.empty()) throw DomainError("system has no channels");

  std::set<std::string> ids;
  std::size_t phantoms = 0;
  for (const auto& ch : channels) {
    if (ch.id.empty()) throw DomainError("channel id must not be empty");
    if (!ids.insert(ch.id).second) throw DomainError("duplicate channel id '" + ch.id + "'");
    if (ch.kind == ChannelKind::Phantom) ++phantoms;
    for (Band b : kAllBands) {
      if (!(ch.decay_rate[b] >= 0.0) || !std::isfinite(ch.decay_rate[b])) {
        throw DomainError("channel '" + ch.id + "': decay rate must be finite and >= 0");
      }
      if (ch.group_velocity[b] && !(*ch.group_velocity[b] > 0.0)) {
        throw DomainError("channel '" + ch.id + "': group velocity override must be positive");
      }
      if (ch.wavenumber[b] && !(*ch.wavenumber[b] > 0.0)) {
        throw DomainError("channel '" + ch.id + "': wavenumber override must be positive");
      }
    }
  }
  if (phantoms > 1) throw DomainError("at most one phantom channel is allowed");

  for (Band b : kAllBands) {
    if (!(total_decay_rate(b) > 0.0)) {
      throw DomainError(std::string("total decay rate of the ") + band_name(b) +
                        " band must be positive");
    }
  }

  const std::size_t in = index_of(pump_channel);
  if (channels[in].kind != ChannelKind::Physical) {
    throw DomainError("pump channel '" + pump_channel + "' must be physical");
  }
}

std::size_t SystemSpec::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].id == id) return i;
  }
  throw DomainError("unknown channel '" + id + "'");
}

std::optional<std::size_t> SystemSpec::phantom_index() const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].kind == ChannelKind::Phantom) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> SystemSpec::physical_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].kind == ChannelKind::Physical) out.push_back(i);
  }
  return out;
}

double SystemSpec::group_velocity(std::size_t channel, Band b) const {
  const auto& v = channels.at(channel).group_velocity[b];
  return v ? *v : bands[b].group_velocity;
}

double SystemSpec::wavenumber(std::size_t channel, Band b) const {
  const auto& k = channels.at(channel).wavenumber[b];
  return k ? *k : bands[b].wavenumber;
}

BandParams SystemSpec::dispersion(std::size_t channel, Band b) const {
  return BandParams{b, bands[b].omega, group_velocity(channel, b), wavenumber(channel, b)};
}

double SystemSpec::total_decay_rate(Band b) const {
  double sum = 0.0;
  for (const auto& ch : channels) sum += ch.decay_rate[b];
  return sum;
}

double SystemSpec::escape_efficiency(std::size_t channel, Band b) const {
  return channels.at(channel).decay_rate[b] / total_decay_rate(b);
}

std::complex<double> SystemSpec::coupling_constant(std::size_t channel, Band b) const {
  const double magnitude = std::sqrt(2.0 * group_velocity(channel, b) * channels.at(channel).decay_rate[b]);
  return std::polar(magnitude, channels[channel].coupling_phase);
}

void CwPump::validate() const {
  if (!(power > 0.0) || !std::isfinite(power)) throw DomainError("CW pump power must be positive");
  if (!(omega > 0.0)) throw DomainError("CW pump frequency must be positive");
}

void PulsedPump::validate() const {
  if (!(duration_fwhm > 0.0) || !std::isfinite(duration_fwhm)) {
    throw DomainError("pulse duration must be positive");
  }
  if (!(omega_center > 0.0)) throw DomainError("pulse centre frequency must be positive");
  if (!std::isfinite(alpha)) throw DomainError("pulse amplitude must be finite");
}

double PulsedPump::bandwidth() const { return 4.0 * std::numbers::ln2 / duration_fwhm; }

// ---------------------------------------------------------------------------

double xi_from_db_per_cm(double loss_db_per_cm) {
  if (!(loss_db_per_cm >= 0.0)) throw DomainError("loss must be non-negative (dB/cm)");
  // dB/cm -> dB/m -> nepers (power): x [dB] = 10 log10(e) * x [Np]
  return loss_db_per_cm * 100.0 * std::numbers::ln10 / 10.0;
}

double db_per_cm_from_xi(double xi) {
  if (!(xi >= 0.0)) throw DomainError("attenuation must be non-negative");
  return xi * 10.0 / (100.0 * std::numbers::ln10);
}

double roundtrip_amplitude(double xi, double length) {
  if (!(xi >= 0.0)) throw DomainError("attenuation must be non-negative");
  if (!(length > 0.0)) throw DomainError("length must be positive");
  return std::exp(-0.5 * xi * length);
}

double gamma_from_sigma(double sigma, double group_velocity, double length) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("self-coupling sigma must lie in (0, 1]");
  if (!(group_velocity > 0.0) || !(length > 0.0)) {
    throw DomainError("group velocity and length must be positive");
  }
  return (1.0 - sigma) * group_velocity / length;
}

double sigma_from_gamma(double decay_rate, double group_velocity, double length) {
  if (!(group_velocity > 0.0) || !(length > 0.0)) {
    throw DomainError("group velocity and length must be positive");
  }
  const double sigma = 1.0 - decay_rate * length / group_velocity;
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw DomainError("decay rate maps to a self-coupling outside (0, 1]");
  }
  return sigma;
}

double phantom_gamma_from_xi(double xi, double group_velocity) {
  if (!(xi >= 0.0)) throw DomainError("attenuation must be non-negative");
  return 0.5 * xi * group_velocity;
}

double gamma_from_q(double omega, double q) {
  if (!(q > 0.0)) throw DomainError("quality factor must be positive");
  return omega / (2.0 * q);
}

double q_from_gamma(double omega, double decay_rate) {
  if (decay_rate == 0.0) return std::numeric_limits<double>::infinity();
  return omega / (2.0 * decay_rate);
}

QualityReport q_and_eta(const SystemSpec& system, Band band) {
  if (system.channels.empty()) throw DomainError("system has no channels");
  QualityReport r;
  r.band = band;
  r.total_decay_rate = system.total_decay_rate(band);
  if (!(r.total_decay_rate > 0.0)) throw DomainError("total decay rate must be positive");
  const double omega = system.bands[band].omega;
  r.q_loaded = omega / (2.0 * r.total_decay_rate);
  for (const auto& ch : system.channels) {
    r.q_coupling.push_back(q_from_gamma(omega, ch.decay_rate[band]));
    r.eta.push_back(ch.decay_rate[band] / r.total_decay_rate);
  }
  return r;
}

double finesse(const SystemSpec& system, Band band) {
  const double fsr = 2.0 * constants::pi * system.bands[band].group_velocity / system.ring.circumference();
  return fsr / (2.0 * system.total_decay_rate(band));
}

}  // namespace lrs
