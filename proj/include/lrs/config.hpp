/**
 * Run configuration: JSON in, SystemSpec out.
 *
 * Units at this boundary only: ring radius in m, wavelengths in nm, loss in
 * dB/cm, pump power in mW, pulse durations in ps, decay rates and detunings
 * in rad/s, group velocities in m/s.  Everything past build_system() is SI.
 *
 * Each physical channel states its coupling exactly once, as one of
 * sigma / Gamma / Q / eta (a number for all bands or a per-band object).  A
 * phantom channel with no coupling takes its rate from the ring loss; if no
 * phantom channel is listed one called "P" is added that way.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrs/model.hpp"

namespace lrs::io {

using ordered_json = nlohmann::ordered_json;

enum class CouplingKind { Sigma, Gamma, Q, Eta, FromLoss };
enum class Strategy { Attenuation, Phantom, Both };

const char* strategy_name(Strategy s) noexcept;

struct BandConfig {
  double wavelength_nm = 1550.0;
  double n_eff = 2.4;
  double group_velocity = 1e8;  // m/s
  bool operator==(const BandConfig&) const = default;
};

struct ChannelConfig {
  std::string id;
  ChannelKind kind = ChannelKind::Physical;
  CouplingKind coupling = CouplingKind::FromLoss;
  PerBand<double> value;  // meaning depends on `coupling`
  PerBand<std::optional<double>> group_velocity;
  double phase_rad = 0.0;
  bool operator==(const ChannelConfig&) const = default;
};

struct PumpConfig {
  bool pulsed = false;
  double power_mw = 1.0;        // cw
  double duration_ps = 10.0;    // pulsed, intensity FWHM
  double alpha = 1.0;           // pulsed
  double detuning_rad_s = 0.0;  // from the pump resonance
  bool operator==(const PumpConfig&) const = default;
};

struct Range {
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 101;
  bool log = false;
  std::vector<double> values() const;
  bool operator==(const Range&) const = default;
};

struct Tolerances {
  double rate_rel_tol = 1e-6;
  double oracle_rel_tol = 1e-8;
  double window_linewidths = 40.0;
  double jsa_g_rel_tol = 1e-8;
  double jsa_max_residual = 1e-3;
  double ratio_identity = 1e-12;
  double oracle_agreement = 1e-6;
  bool operator==(const Tolerances&) const = default;
};

struct JsaConfig {
  std::size_t n = 512;
  double kappa_min = -12.0;
  double kappa_max = 12.0;
  std::string ref_signal;  // empty: first physical channel
  std::string ref_idler;
  double cw_check_duration_ps = 10000.0;
  double cw_check_half_width = 3.0;  // pump bandwidths
  bool operator==(const JsaConfig&) const = default;
};

struct OracleConfig {
  std::size_t random_systems = 20;
  std::uint64_t seed = 1;
  bool operator==(const OracleConfig&) const = default;
};

struct RunConfig {
  RingSpec ring;
  PerBand<BandConfig> bands;
  std::vector<ChannelConfig> channels;
  std::string pump_channel;
  PumpConfig pump;
  Strategy strategy = Strategy::Both;
  Tolerances tolerances;
  Range sweep_sigma{0.9, 1.0, 101, false};
  Range sweep_eta{0.005, 0.995, 101, false};
  Range compare_finesse{10.0, 3000.0, 41, true};
  Range compare_sigma2{0.3, 1.0, 101, false};
  Range add_drop_grid{0.05, 5.0, 81, true};
  JsaConfig jsa;
  OracleConfig oracle;
  std::string output_dir = "out";
  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Resolved system with every coupling as a decay rate.  Always contains a
/// phantom channel.  Throws ConfigError for unresolvable couplings.
SystemSpec build_system(const RunConfig& config);
CwPump cw_pump(const RunConfig& config);
PulsedPump pulsed_pump(const RunConfig& config);

/// a, xi, Q_int, Q_load, eta, sigma, finesse, ... for the metadata sidecar.
ordered_json derived_parameters(const RunConfig& config);

}  // namespace lrs::io
