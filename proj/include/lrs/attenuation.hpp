/**
 * Point-coupler ring fields with a complex propagation wavevector, and the
 * CW pair rate built on them.
 *
 * Wavevectors are measured from the band's ring resonance, q = k - K_J,
 * with K_J L a multiple of 2 pi, so e^{ikL} = e^{iqL}.  Asymptotic-in fields
 * carry q + i xi/2 (attenuation along propagation); asymptotic-out fields
 * carry q - i xi/2 (the matching enhancement).
 *
 * Couplers: coupler 1 at zeta = 0 joins the pump waveguide; the optional
 * coupler 2 (add-drop) sits at zeta = L/2.  Ring amplitudes are returned as
 * per-half coefficients c_h of e^{i q zeta}.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lrs/model.hpp"
#include "lrs/numerics.hpp"

namespace lrs::attenuation {

using cplx = std::complex<double>;

struct PointCoupler {
  double sigma = 1.0;
  double kappa = 0.0;

  static PointCoupler from_sigma(double sigma);
  void validate() const;
};

/// f2 = sigma f1 + i kappa f4,  f3 = i kappa f1 + sigma f4.
std::pair<cplx, cplx> coupler_scatter(const PointCoupler& c, cplx f1, cplx f4);

enum class Regime { In, Out };

struct ComplexWavevector {
  cplx q;  // 1/m, relative to the ring resonance
  Regime regime = Regime::In;

  static ComplexWavevector in(double dq, double xi) { return {cplx(dq, 0.5 * xi), Regime::In}; }
  static ComplexWavevector out(double dq, double xi) { return {cplx(dq, -0.5 * xi), Regime::Out}; }
};

struct RingFieldAmps {
  cplx f_ring;     // coefficient of e^{i q zeta} in the ring
  cplx f_through;  // In: output of the bus.  Out: amplitude in the bus input region.
  Regime regime = Regime::In;
};

/// All-pass ring.  Throws SingularityError at the lossless pole.
RingFieldAmps asy_fields(double sigma, const ComplexWavevector& q, double length);

/// Two-coupler ring.  For Regime::In the excitation enters coupler 1 from
/// the bus.  For Regime::Out the field leaves through `out_port` (0: the
/// through port of coupler 1, 1: the drop port of coupler 2).
struct AddDropFields {
  std::array<cplx, 2> ring;  // per half-ring coefficient of e^{i q zeta}
  cplx through;              // In: through output.  Out: amplitude in the bus input.
  cplx drop;                 // In: drop output.     Out: amplitude in the add input.
  Regime regime = Regime::In;
};

AddDropFields add_drop_fields(double sigma1, double sigma2, const ComplexWavevector& q,
                              double length, std::size_t out_port = 0);

/// Ring field of one band: per-half coefficients and the wavevector.
struct RingProfile {
  std::array<cplx, 2> c;
  cplx q;
};

/// Closed-form overlap over the ring of conj(S I) P3 P4, with an extra
/// e^{i delta_kappa zeta} phase.  Units of m.
cplx overlap_J(const RingProfile& s, const RingProfile& i, const RingProfile& p3,
               const RingProfile& p4, double length, double delta_kappa = 0.0);

/// Integral of e^{i d zeta} over [a, a + len], series-expanded for small |d len|.
cplx phase_integral(cplx d, double a, double len);

/// Attenuation-strategy view of a ring with one or two physical couplers.
struct AttenuationModel {
  RingSpec ring;
  PerBand<BandParams> bands;
  std::vector<std::string> ids;         // coupler order; ids[0] carries the pump
  std::vector<PerBand<double>> sigma;   // per coupler, per band
  double xi = 0.0;                      // 1/m

  /// Physical channels only; the phantom channel (if any) is ignored and
  /// loss comes from the ring's dB/cm.  The pump channel becomes coupler 1.
  static AttenuationModel from_system(const SystemSpec& system);
  /// Ring-channel model with the same sigma in every band.
  static AttenuationModel ring_channel(const RingSpec& ring, const PerBand<BandParams>& bands,
                                       double sigma, std::string id = "O");

  double length() const { return ring.circumference(); }
  std::size_t index_of(const std::string& id) const;
  void validate() const;

  RingProfile in_profile(Band b, double omega) const;
  RingProfile out_profile(Band b, double omega, std::size_t port) const;

  /// Product sigma1 sigma2 a for band b: the loaded round-trip amplitude.
  double loaded_roundtrip(Band b) const;
  /// Exact FWHM (rad/s) of the ring resonance in band b, or the FSR when the
  /// resonance is too broad to have one.
  double linewidth(Band b) const;
};

struct RateOptions {
  double window_linewidths = 40.0;
  double rel_tol = kRateRelTol;
};

struct RateResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

/// J(w1, 2 w_o - w1, w_o, w_o) for output channels (signal_port, idler_port).
cplx overlap_at(const AttenuationModel& m, double omega1, double omega_pump, std::size_t signal_port,
                std::size_t idler_port);

/// CW pair rate into (signal_port, idler_port), pairs/s.
RateResult pair_rate_cw(const AttenuationModel& m, const CwPump& pump, std::size_t signal_port,
                        std::size_t idler_port, const RateOptions& opts = {});

}  // namespace lrs::attenuation
