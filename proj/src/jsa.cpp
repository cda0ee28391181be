#include "lrs/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"
#include "lrs/kernels.hpp"
#include "lrs/numerics.hpp"
#include "lrs/parallel.hpp"
#include "lrs/phantom.hpp"

namespace lrs::phantom {
namespace {

constexpr cplx I{0.0, 1.0};

// Lorentzian convolution: integral over d of 1/((d^2 + A^2)((W - d)^2 + B^2)).
double lorentz_pair(double W, double A, double B) {
  const double s = A + B;
  return constants::pi * s / (A * B * (W * W + s * s));
}

// Everything except |g|^2 in |beta|^2 = prefactor * int |g(W)|^2 lorentz_pair(W) dW.
double beta2_prefactor(const SystemSpec& s, const PulsedPump& pulse) {
  const double vp = s.group_velocity(s.pump_index(), Band::Pump);
  const double gl = s.ring.gamma_nl * s.ring.circumference();
  const double L = s.ring.circumference();
  const double h = constants::hbar / (2.0 * constants::pi);
  const double a2 = pulse.alpha * pulse.alpha;
  return a2 * a2 * h * h * s.bands.signal.omega * s.bands.idler.omega * std::pow(vp, 4) * gl * gl * 4.0 *
         s.total_decay_rate(Band::Signal) * s.total_decay_rate(Band::Idler) / (L * L);
}

double pair_weight_density(const SystemSpec& s, const PulsedPump& pulse, double W, const JsaOptions& opts) {
  return std::norm(pump_overlap_g(s, pulse, W, opts)) *
         lorentz_pair(W, s.total_decay_rate(Band::Signal), s.total_decay_rate(Band::Idler));
}

// Sum detunings where the density is concentrated: the pulse centre line and
// the pump resonance.
std::vector<double> density_peaks(const SystemSpec& s, const PulsedPump& pulse) {
  const double offset = s.bands.signal.omega + s.bands.idler.omega - 2.0 * s.bands.pump.omega;
  const double uc = pulse.omega_center - s.bands.pump.omega;
  return {2.0 * uc - offset, -offset, 0.0};
}

JsaOptions nested(const JsaOptions& opts) {
  JsaOptions inner = opts;
  inner.g_rel_tol = opts.g_rel_tol * 1e-2;
  return inner;
}

}  // namespace

double pulse_amplitude(const SystemSpec& system, const PulsedPump& pulse, double u) {
  const double vp = system.group_velocity(system.pump_index(), Band::Pump);
  const double tau = pulse.duration_fwhm;
  const double n2 = vp * tau / std::sqrt(4.0 * constants::pi * std::numbers::ln2);
  const double x = u - (pulse.omega_center - system.bands.pump.omega);
  return std::sqrt(n2) * std::exp(-x * x * tau * tau / (8.0 * std::numbers::ln2));
}

cplx pump_overlap_g(const SystemSpec& system, const PulsedPump& pulse, double Omega, const JsaOptions& opts) {
  pulse.validate();
  const std::size_t in = system.pump_index();
  const double vp = system.group_velocity(in, Band::Pump);
  const double s = Omega + system.bands.signal.omega + system.bands.idler.omega - 2.0 * system.bands.pump.omega;
  const double bw = pulse.bandwidth();
  const double half = opts.window_bandwidths * bw;
  const double gp = system.total_decay_rate(Band::Pump);

  std::vector<double> breaks{0.5 * s - half, 0.5 * s + half};
  for (double pole : {0.0, s}) {
    for (double off : {0.0, -gp, gp, -4.0 * gp, 4.0 * gp}) {
      const double x = pole + off;
      if (x > breaks[0] && x < breaks[1]) breaks.push_back(x);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double a, double b) { return std::abs(a - b) <= 1e-12 * half; }),
               breaks.end());

  // phi(u) phi(s-u) = N^2 exp(-a (s - 2 u_c)^2 / 2) exp(-2 a (u - s/2)^2), a = tau^2 / (8 ln2).
  // The envelope is pulled out so the quadrature never sees underflowed values.
  const double tau = pulse.duration_fwhm;
  const double a = tau * tau / (8.0 * std::numbers::ln2);
  const double uc = pulse.omega_center - system.bands.pump.omega;
  const double envelope = std::exp(-0.5 * a * (s - 2.0 * uc) * (s - 2.0 * uc));
  if (envelope == 0.0) return {};
  const double n2 = vp * tau / std::sqrt(4.0 * constants::pi * std::numbers::ln2);

  auto integrand = [&](double u) -> cplx {
    const double x = u - 0.5 * s;
    return enhancement_at_detuning(system, in, Band::Pump, u, Sign::Minus) *
           enhancement_at_detuning(system, in, Band::Pump, s - u, Sign::Minus) * std::exp(-2.0 * a * x * x);
  };
  QuadratureOptions q;
  q.rel_tol = opts.g_rel_tol;
  const auto r = integrate_adaptive(integrand, std::span<const double>(breaks), q);
  return r.value * (n2 * envelope / (vp * vp));
}

double pair_probability(const SystemSpec& system, const PulsedPump& pulse, const JsaOptions& opts) {
  system.validate();
  pulse.validate();
  const JsaOptions inner = nested(opts);
  const auto peaks = density_peaks(system, pulse);
  auto f = [&](double W) { return pair_weight_density(system, pulse, W, inner); };
  QuadratureOptions q;
  q.rel_tol = opts.g_rel_tol;
  q.initial_panels = 4;
  const double scale = system.total_decay_rate(Band::Signal) + system.total_decay_rate(Band::Idler);
  const auto r = integrate_real_line(f, 0.0, scale, std::span<const double>(peaks), q);
  return beta2_prefactor(system, pulse) * r.value;
}

namespace {

cplx jsa_prefactor(const SystemSpec& s, const PulsedPump& pulse, double beta2) {
  if (!(beta2 > 0.0)) throw DomainError("pair probability must be positive");
  const double vp = s.group_velocity(s.pump_index(), Band::Pump);
  const double gl = s.ring.gamma_nl * s.ring.circumference();
  return (pulse.alpha * pulse.alpha / std::sqrt(beta2)) * (I * constants::hbar / (2.0 * constants::pi)) *
         std::sqrt(s.bands.signal.omega * s.bands.idler.omega) * vp * vp * gl;
}

}  // namespace

cplx jsa_amplitude(const SystemSpec& system, const PulsedPump& pulse, std::size_t x, std::size_t xp,
                   double kappa1, double kappa2, double beta2, const JsaOptions& opts) {
  const double gs = system.total_decay_rate(Band::Signal);
  const double gi = system.total_decay_rate(Band::Idler);
  const cplx fs = enhancement_at_detuning(system, x, Band::Signal, gs * kappa1, Sign::Plus);
  const cplx fi = enhancement_at_detuning(system, xp, Band::Idler, gi * kappa2, Sign::Plus);
  const cplx g = pump_overlap_g(system, pulse, gs * kappa1 + gi * kappa2, opts);
  return jsa_prefactor(system, pulse, beta2) * std::conj(fs) * std::conj(fi) * g;
}

JsaGrid compute_jsa(const SystemSpec& system, const PulsedPump& pulse, const GridSpec& grid,
                    std::size_t ref_signal, std::size_t ref_idler, const JsaOptions& opts) {
  system.validate();
  pulse.validate();
  if (grid.n < 2 || !(grid.kappa_min < grid.kappa_max)) throw DomainError("JSA grid needs n >= 2 and min < max");
  const std::size_t nch = system.channels.size();
  if (ref_signal >= nch || ref_idler >= nch) throw DomainError("JSA reference channel out of range");

  JsaGrid out;
  out.grid = grid;
  out.ref_signal = ref_signal;
  out.ref_idler = ref_idler;
  for (const auto& ch : system.channels) out.ids.push_back(ch.id);
  const std::size_t n = grid.n;
  out.kappa1 = linspace(grid.kappa_min, grid.kappa_max, n);
  out.kappa2 = out.kappa1;
  const double dkappa = (grid.kappa_max - grid.kappa_min) / static_cast<double>(n - 1);

  const double gs = system.total_decay_rate(Band::Signal);
  const double gi = system.total_decay_rate(Band::Idler);
  const double L = system.ring.circumference();

  // weights relative to the reference pair
  const cplx gref = system.coupling_constant(ref_signal, Band::Signal) * system.coupling_constant(ref_idler, Band::Idler);
  if (gref == cplx{}) throw DomainError("JSA reference pair has zero coupling");
  const double vref = system.group_velocity(ref_signal, Band::Signal) * system.group_velocity(ref_idler, Band::Idler);
  for (std::size_t x = 0; x < nch; ++x) {
    for (std::size_t xp = 0; xp < nch; ++xp) {
      const cplx gx = system.coupling_constant(x, Band::Signal) * system.coupling_constant(xp, Band::Idler);
      const double vx = system.group_velocity(x, Band::Signal) * system.group_velocity(xp, Band::Idler);
      out.weights.push_back({x, xp, gx / gref, vref / vx});
    }
  }

  out.beta2 = pair_probability(system, pulse, opts);
  const cplx pref = jsa_prefactor(system, pulse, out.beta2);
  const auto& k = kernels::active();

  // conj(F_+) = (gamma / (sqrt(L) Gamma_bar)) / (-kappa - i)
  std::vector<double> neg1(n), neg2(n);
  for (std::size_t i = 0; i < n; ++i) {
    neg1[i] = -out.kappa1[i];
    neg2[i] = -out.kappa2[i];
  }
  std::vector<cplx> a(n), b(n);
  k.resonant_response(system.coupling_constant(ref_signal, Band::Signal) / (std::sqrt(L) * gs), neg1.data(), -1.0,
                      a.data(), n);
  k.resonant_response(system.coupling_constant(ref_idler, Band::Idler) / (std::sqrt(L) * gi), neg2.data(), -1.0,
                      b.data(), n);

  out.values.resize(n * n);
  if (gs == gi) {
    // sum frequency depends on i + j only
    std::vector<cplx> g(2 * n - 1);
    parallel_for(g.size(), opts.threads, [&](std::size_t m) {
      const double kap = 2.0 * grid.kappa_min + static_cast<double>(m) * dkappa;
      g[m] = pump_overlap_g(system, pulse, gs * kap, opts);
    });
    parallel_for(n, opts.threads, [&](std::size_t i) {
      k.scaled_outer_product(pref, a.data() + i, 1, b.data(), n, g.data() + i, out.values.data() + i * n);
    });
  } else {
    parallel_for(n, opts.threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) {
        const cplx g = pump_overlap_g(system, pulse, gs * out.kappa1[i] + gi * out.kappa2[j], opts);
        out.values[i * n + j] = pref * a[i] * b[j] * g;
      }
    });
  }

  out.dk1 = gs * dkappa / system.group_velocity(ref_signal, Band::Signal);
  out.dk2 = gi * dkappa / system.group_velocity(ref_idler, Band::Idler);
  const double ref_norm = grid_integrate_abs2_2d(out.values, n, n, out.dk1, out.dk2);
  double total = 0.0;
  for (const auto& w : out.weights) total += std::norm(w.weight) * w.measure * ref_norm;
  out.normalization = total;
  out.residual = std::abs(total - 1.0);
  if (opts.max_residual > 0.0 && out.residual > opts.max_residual) {
    throw GridResolutionError("JSA normalisation residual " + std::to_string(out.residual) +
                                  " exceeds tolerance; widen or refine the grid",
                              out.residual);
  }
  return out;
}

double energy_line_mass_fraction(const SystemSpec& system, const PulsedPump& pulse, double half_width,
                                 const JsaOptions& opts) {
  system.validate();
  pulse.validate();
  if (!(half_width > 0.0)) throw DomainError("half width must be positive");
  const JsaOptions inner = nested(opts);
  auto f = [&](double W) { return pair_weight_density(system, pulse, W, inner); };
  const auto peaks = density_peaks(system, pulse);
  const double line = peaks[0];

  QuadratureOptions q;
  q.rel_tol = opts.g_rel_tol;
  q.initial_panels = 4;
  const double scale = system.total_decay_rate(Band::Signal) + system.total_decay_rate(Band::Idler);
  const double total = integrate_real_line(f, 0.0, scale, std::span<const double>(peaks), q).value;

  std::vector<double> breaks{line - half_width, line, line + half_width};
  for (double p : peaks)
    if (p > breaks.front() && p < breaks.back()) breaks.push_back(p);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const double near = integrate_adaptive(f, std::span<const double>(breaks), q).value;
  return near / total;
}

}  // namespace lrs::phantom
