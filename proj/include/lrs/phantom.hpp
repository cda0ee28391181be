/**
 * Phantom-channel model: scattering loss is an extra (unobserved) waveguide
 * coupled to the ring, so every quantity below is a lossless input-output
 * result with one more channel.
 *
 * Wavevector arguments k are absolute and live in the named channel's
 * waveguide, omega(k) = omega_J + v_X (k - K_X).
 */
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "lrs/model.hpp"
#include "lrs/numerics.hpp"

namespace lrs::phantom {

using cplx = std::complex<double>;

enum class Sign { Minus, Plus };  // Minus: asymptotic-in, Plus: asymptotic-out

struct EnhancementFactor {
  cplx value;
  Sign sign = Sign::Minus;
  std::size_t channel = 0;
  Band band = Band::Pump;
  double k = 0.0;
};

/// F = (1/sqrt(L)) conj(gamma_X) / (v_X (K_X - k) +- i Gamma_bar).
EnhancementFactor enhancement_F(const SystemSpec& system, std::size_t channel, Band band, double k,
                                Sign sign);
/// Same, at a detuning omega - omega_J instead of a wavevector.
cplx enhancement_at_detuning(const SystemSpec& system, std::size_t channel, Band band, double detuning,
                             Sign sign);

enum class Region { Input, Output, Ring };

struct PiecewiseAmplitude {
  Region region = Region::Input;
  std::size_t channel = 0;  // unused for Region::Ring
  cplx amplitude;           // ring: coefficient of e^{i kappa_J zeta}
};

/// Field of the asymptotic-in mode entering through channel `input`: one
/// entry per input region, one per output region, and the ring.
std::vector<PiecewiseAmplitude> asy_in_amplitude(const SystemSpec& system, std::size_t input, Band band,
                                                 double k);
/// Dual: the asymptotic-out mode leaving through channel `output`.
std::vector<PiecewiseAmplitude> asy_out_amplitude(const SystemSpec& system, std::size_t output,
                                                  Band band, double k);

/// Lorentzian-weighted vacuum power (W).
double vacuum_power(double gamma_s_bar, double gamma_i_bar, double omega_s, double omega_i,
                    double detuning);

/// Pump wavevector in the input waveguide, K_P + (omega_o - omega_P)/v_P.
double pump_wavevector(const SystemSpec& system, const CwPump& pump);

/// Closed-form CW rate, signal out of channel `x`, idler out of `xp`.
double pair_rate_cw(const SystemSpec& system, const CwPump& pump, std::size_t x, std::size_t xp);

struct RateMatrix {
  std::vector<std::string> ids;
  std::vector<double> entries;  // row = signal channel, column = idler channel
  double p_vac = 0.0;
  PerBand<std::vector<double>> eta;

  std::size_t size() const { return ids.size(); }
  double at(std::size_t x, std::size_t xp) const { return entries.at(x * ids.size() + xp); }
  std::size_t index_of(const std::string& id) const;
};

RateMatrix rate_matrix(const SystemSpec& system, const CwPump& pump);

/// R^{x xp} / R^{y yp}.  Throws DomainError when the denominator is zero.
double rate_ratio(const RateMatrix& m, std::size_t x, std::size_t xp, std::size_t y, std::size_t yp);
/// The same ratio predicted from escape efficiencies and group velocities alone.
double predicted_ratio(const SystemSpec& system, std::size_t x, std::size_t xp, std::size_t y,
                       std::size_t yp);

struct OracleResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-rule rate by direct quadrature of the coupling kernel K^{XX'}
/// along the CW energy line.  Independent of the closed form above except
/// for the enhancement factors themselves.
OracleResult fgr_rate_oracle(const SystemSpec& system, const CwPump& pump, std::size_t x,
                             std::size_t xp, double rel_tol = kOracleRelTol);

/// The coupling kernel K^{XX'}(k1, k2, k3, k4) in SI units.
cplx coupling_kernel(const SystemSpec& system, std::size_t x, std::size_t xp, double k1, double k2,
                     double k3, double k4);

}  // namespace lrs::phantom
