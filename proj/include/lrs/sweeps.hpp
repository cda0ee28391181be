/**
 * Parameter studies.  Every sweep evaluates its grid points independently
 * (optionally on several threads) and stores them in axis order, so the
 * result does not depend on the worker count.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lrs/attenuation.hpp"
#include "lrs/model.hpp"
#include "lrs/phantom.hpp"

namespace lrs::sweeps {

struct Column {
  std::string name;
  std::vector<double> values;  // one per grid point
};

struct SweepResult {
  std::string kind;      // e.g. "sweep-eta"
  std::string strategy;  // "attenuation", "phantom" or "both"
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axes;  // 1 or 2 axes; 2-D points are row-major, first axis slow
  std::vector<Column> columns;            // axis columns first
  std::vector<std::pair<std::string, double>> summary;
  std::vector<phantom::RateMatrix> matrices;  // per point, phantom sweeps only

  std::size_t points() const;
  const Column& column(const std::string& name) const;
  double summary_value(const std::string& name) const;
  /// Throws DomainError if an axis is not strictly monotone or a column has the wrong length.
  void validate() const;
};

struct SweepOptions {
  unsigned threads = 1;
  attenuation::RateOptions rate;
};

/// Column label for a rate into channels (x, xp), e.g. "R_OP".
std::string rate_label(const std::string& x, const std::string& xp);

/// Largest |R^{XX'}/R^{YY'} - eta ratio| relative error over all pairs of
/// nonzero entries, plus a check that every entry is non-negative
/// (negative entries return +inf).
double ratio_identity_error(const SystemSpec& system, const phantom::RateMatrix& m);

/// Strategy 1, single bus: rate against the self-coupling sigma at fixed loss.
/// Summary: sigma_max, R_max, a (critical coupling), eta_at_sigma_max.
SweepResult sweep_sigma(const attenuation::AttenuationModel& base, const CwPump& pump,
                        const std::vector<double>& sigmas, const SweepOptions& opts = {});

/// Strategy 2, one physical channel plus phantom.  The phantom rate is held
/// fixed and Gamma_O = eta/(1-eta) Gamma_P in every band.
/// Summary: eta_max (quadratic interpolation of R for the physical pair), R_max, max_ratio_error.
SweepResult sweep_eta(const SystemSpec& base, const CwPump& pump, const std::vector<double>& etas,
                      const SweepOptions& opts = {});

/// Both strategies on a single-bus ring at each target finesse.  The ratio
/// (1 - sigma)/(1 - a) of the base system is kept and the loss is solved for.
SweepResult compare_finesse(const SystemSpec& base, const CwPump& pump,
                            const std::vector<double>& finesses, const SweepOptions& opts = {});

/// Both strategies on an add-drop ring with fixed through coupling sigma1,
/// sweeping the drop coupling sigma2 at fixed loss.
SweepResult compare_finesse_add_drop(const SystemSpec& base, const CwPump& pump, double sigma1,
                                     const std::vector<double>& sigma2s, const SweepOptions& opts = {});

/// Strategy 2 with through (pump), drop and phantom channels.  Axes are
/// Gamma_T/Gamma_P and Gamma_D/Gamma_P.  Summary holds, for each of the nine
/// rates, the argmax on the grid refined by quadratic interpolation in log
/// coordinates, and the drop-drop rate at (0.5, 1.0) relative to its maximum.
SweepResult add_drop_grid(const SystemSpec& base, const CwPump& pump, const std::vector<double>& t_ratios,
                          const std::vector<double>& d_ratios, const SweepOptions& opts = {});

/// Copy of `base` with channel couplings replaced (all bands).  Used by the
/// sweeps; exposed for tests.
SystemSpec with_decay_rates(const SystemSpec& base, const std::vector<PerBand<double>>& rates);

/// Random valid phantom-strategy system: 1 to 3 physical channels plus a
/// phantom, random rates, velocities, phases and a detuned pump.  Deterministic in `seed`.
std::pair<SystemSpec, CwPump> random_system(std::uint64_t seed);

}  // namespace lrs::sweeps
