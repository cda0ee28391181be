/**
 * Joint spectral amplitude of a pair generated by a Gaussian pump pulse.
 *
 * Grid axes are dimensionless detunings kappa = (omega - omega_J)/Gamma_bar_J,
 * which are the same for every channel.  Only the reference channel pair is
 * stored; the other pairs differ from it by a constant factor (`weights`).
 */
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "lrs/model.hpp"

namespace lrs::phantom {

using cplx = std::complex<double>;

struct GridSpec {
  std::size_t n = 512;
  double kappa_min = -12.0;
  double kappa_max = 12.0;
};

struct PairWeight {
  std::size_t signal = 0;
  std::size_t idler = 0;
  /// phi^{XX'} / phi^{ref} at equal frequencies.
  cplx weight;
  /// dk1 dk2 of pair XX' relative to the reference pair, v_ref v_ref' / (v_X v_X').
  double measure = 1.0;
};

struct JsaGrid {
  GridSpec grid;
  std::vector<double> kappa1, kappa2;
  std::vector<std::string> ids;
  std::size_t ref_signal = 0, ref_idler = 0;
  std::vector<cplx> values;  // phi^{ref}, n*n row-major, row index = kappa1, units 1/m
  std::vector<PairWeight> weights;
  double beta2 = 0.0;
  double dk1 = 0.0, dk2 = 0.0;  // wavevector spacing of the reference axes (1/m)
  double normalization = 0.0;   // sum over pairs of the grid integral of |phi|^2
  double residual = 0.0;        // |normalization - 1|
};

struct JsaOptions {
  double g_rel_tol = 1e-8;
  double window_bandwidths = 6.0;
  /// Residual above this throws GridResolutionError; <= 0 disables the check.
  double max_residual = 1e-3;
  unsigned threads = 1;
};

/// Normalised pulse amplitude phi as a function of the pump photon detuning
/// u = omega - omega_P (units 1/sqrt(1/m), since the integral over k of |phi|^2 is 1).
double pulse_amplitude(const SystemSpec& system, const PulsedPump& pulse, double u);

/// g at total pair detuning Omega = omega1 + omega2 - omega_S - omega_I.
cplx pump_overlap_g(const SystemSpec& system, const PulsedPump& pulse, double Omega,
                    const JsaOptions& opts = {});

/// |beta|^2 from the normalisation condition, by 1-D quadrature over Omega.
double pair_probability(const SystemSpec& system, const PulsedPump& pulse, const JsaOptions& opts = {});

/// phi^{XX'} at dimensionless detunings, given |beta|^2 (beta taken real positive).
cplx jsa_amplitude(const SystemSpec& system, const PulsedPump& pulse, std::size_t x, std::size_t xp,
                   double kappa1, double kappa2, double beta2, const JsaOptions& opts = {});

JsaGrid compute_jsa(const SystemSpec& system, const PulsedPump& pulse, const GridSpec& grid,
                    std::size_t ref_signal, std::size_t ref_idler, const JsaOptions& opts = {});

/// Fraction of the total pair probability whose sum frequency lies within
/// +-half_width of the energy-conservation line omega1 + omega2 = 2 omega_c.
double energy_line_mass_fraction(const SystemSpec& system, const PulsedPump& pulse, double half_width,
                                 const JsaOptions& opts = {});

}  // namespace lrs::phantom
