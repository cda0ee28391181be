/**
 * model.hpp: domain types for a microring coupled to bus waveguides, and
 * conversions among the equivalent ways of stating ring-channel coupling.
 *
 * Canonical internal representation of coupling is the per-band decay rate
 * Gamma_J^(X) in rad/s.  Everything else (self-coupling sigma, coupling Q,
 * escape efficiency eta, amplitude coupling gamma) is a derived view.
 *
 * Units are SI throughout: lengths in m, angular frequencies in rad/s,
 * wavenumbers in 1/m, the power attenuation constant xi in 1/m.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lrs {

enum class Band { Pump, Signal, Idler };

inline constexpr std::array<Band, 3> kAllBands{Band::Pump, Band::Signal, Band::Idler};

const char* band_name(Band band) noexcept;

/// One value per frequency band.
template <class T>
struct PerBand {
  T pump{};
  T signal{};
  T idler{};

  T& operator[](Band b) noexcept {
    switch (b) {
      case Band::Pump: return pump;
      case Band::Signal: return signal;
      default: return idler;
    }
  }
  const T& operator[](Band b) const noexcept {
    switch (b) {
      case Band::Pump: return pump;
      case Band::Signal: return signal;
      default: return idler;
    }
  }

  bool operator==(const PerBand&) const = default;
};

/// Linear dispersion about a ring resonance: omega(k) = omega + v (k - K).
struct BandParams {
  Band label = Band::Pump;
  double omega = 0.0;           // rad/s
  double group_velocity = 0.0;  // m/s
  double wavenumber = 0.0;      // 1/m

  double omega_at(double k) const noexcept { return omega + group_velocity * (k - wavenumber); }
  double k_at(double w) const noexcept { return wavenumber + (w - omega) / group_velocity; }

  void validate() const;
  bool operator==(const BandParams&) const = default;
};

struct RingSpec {
  double radius = 0.0;          // m
  double loss_db_per_cm = 0.0;  // power attenuation
  double gamma_nl = 0.0;        // 1/(W m)
  double delta_kappa = 0.0;     // 1/m, ring wavenumber mismatch

  double circumference() const noexcept;
  /// Power attenuation constant xi (1/m).
  double attenuation() const;
  /// Field amplitude surviving one round trip, e^{-xi L / 2}.
  double roundtrip_amplitude() const;

  void validate() const;
  bool operator==(const RingSpec&) const = default;
};

enum class ChannelKind { Physical, Phantom };

struct ChannelCoupling {
  std::string id;
  ChannelKind kind = ChannelKind::Physical;
  PerBand<double> decay_rate;  // Gamma_J^(X), rad/s
  /// Per-band group velocity / reference wavenumber of this channel's
  /// waveguide; unset means "same as the band default".
  PerBand<std::optional<double>> group_velocity;
  PerBand<std::optional<double>> wavenumber;
  /// Phase of the amplitude coupling constant gamma_J^(X) (rad).
  double coupling_phase = 0.0;

  bool operator==(const ChannelCoupling&) const = default;
};

struct SystemSpec {
  RingSpec ring;
  PerBand<BandParams> bands;
  std::vector<ChannelCoupling> channels;
  std::string pump_channel;

  /// Throws DomainError on any broken invariant.
  void validate() const;

  std::size_t index_of(const std::string& id) const;
  std::size_t pump_index() const { return index_of(pump_channel); }
  std::optional<std::size_t> phantom_index() const;
  std::vector<std::size_t> physical_indices() const;

  double group_velocity(std::size_t channel, Band b) const;
  double wavenumber(std::size_t channel, Band b) const;
  /// Dispersion of band b as seen in channel X's waveguide.
  BandParams dispersion(std::size_t channel, Band b) const;

  /// Gamma_bar_J = sum over channels of Gamma_J^(X).
  double total_decay_rate(Band b) const;
  double escape_efficiency(std::size_t channel, Band b) const;
  /// gamma_J^(X) with |gamma|^2 = 2 v Gamma.
  std::complex<double> coupling_constant(std::size_t channel, Band b) const;

  bool operator==(const SystemSpec&) const = default;
};

/// Continuous-wave pump at angular frequency omega (the centre plus any
/// detuning from the pump resonance).
struct CwPump {
  double power = 0.0;  // W
  double omega = 0.0;  // rad/s
  void validate() const;
  bool operator==(const CwPump&) const = default;
};

/// Gaussian pulse; duration is the intensity FWHM.  The spectral amplitude
/// phi(k) is normalised so that the integral of |phi|^2 dk is 1.
struct PulsedPump {
  double duration_fwhm = 0.0;  // s
  double omega_center = 0.0;   // rad/s
  double alpha = 1.0;          // classical amplitude
  void validate() const;
  /// FWHM of the intensity spectrum |phi|^2, rad/s (4 ln2 / duration).
  double bandwidth() const;
  bool operator==(const PulsedPump&) const = default;
};

using PumpSpec = std::variant<CwPump, PulsedPump>;

// ---------------------------------------------------------------------------
// Conversions

/// dB/cm (power) -> xi in 1/m.
double xi_from_db_per_cm(double loss_db_per_cm);
double db_per_cm_from_xi(double xi);

/// a = e^{-xi L / 2}.
double roundtrip_amplitude(double xi, double length);

/// Gamma = (1 - sigma) v / L, valid in the high-finesse limit.
double gamma_from_sigma(double sigma, double group_velocity, double length);
double sigma_from_gamma(double decay_rate, double group_velocity, double length);

/// Decay rate into the phantom channel that reproduces attenuation xi:
/// Gamma = xi v / 2, so that Q_int = omega / (xi v).
double phantom_gamma_from_xi(double xi, double group_velocity);

double gamma_from_q(double omega, double q);
double q_from_gamma(double omega, double decay_rate);

struct QualityReport {
  Band band = Band::Pump;
  double total_decay_rate = 0.0;
  double q_loaded = 0.0;
  std::vector<double> q_coupling;  // per channel, +inf for Gamma = 0
  std::vector<double> eta;         // per channel
};

QualityReport q_and_eta(const SystemSpec& system, Band band);

/// FSR / FWHM = (2 pi v / L) / (2 Gamma_bar), using the band default v.
double finesse(const SystemSpec& system, Band band = Band::Pump);

}  // namespace lrs
