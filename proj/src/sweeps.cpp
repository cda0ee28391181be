#include "lrs/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"
#include "lrs/numerics.hpp"
#include "lrs/parallel.hpp"

namespace lrs::sweeps {
namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

double rel_diff(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (a - b) / b;
}

PerBand<double> uniform(double x) { return {x, x, x}; }

// Single physical channel + phantom, the shape sweep_eta and compare_finesse expect.
std::pair<std::size_t, std::optional<std::size_t>> single_bus(const SystemSpec& s) {
  const auto phys = s.physical_indices();
  if (phys.size() != 1) throw DomainError("expected exactly one physical channel");
  return {phys.front(), s.phantom_index()};
}

SystemSpec ensure_phantom(SystemSpec s) {
  if (s.phantom_index()) return s;
  ChannelCoupling p;
  p.id = "P";
  p.kind = ChannelKind::Phantom;
  const double xi = s.ring.attenuation();
  for (Band b : kAllBands) p.decay_rate[b] = phantom_gamma_from_xi(xi, s.bands[b].group_velocity);
  s.channels.push_back(p);
  return s;
}

std::vector<std::string> all_labels(const SystemSpec& s) {
  std::vector<std::string> out;
  for (const auto& x : s.channels)
    for (const auto& y : s.channels) out.push_back(rate_label(x.id, y.id));
  return out;
}

// Quadratic refinement of an argmax on a log-spaced axis.
double refine_log(const std::vector<double>& axis, const std::vector<double>& y, std::size_t i) {
  std::vector<double> lx(axis.size());
  std::transform(axis.begin(), axis.end(), lx.begin(), [](double v) { return std::log(v); });
  return std::exp(quadratic_peak(lx, y, i));
}

}  // namespace

std::size_t SweepResult::points() const { return columns.empty() ? 0 : columns.front().values.size(); }

const Column& SweepResult::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return c;
  throw DomainError("no column '" + name + "'");
}

double SweepResult::summary_value(const std::string& name) const {
  for (const auto& [k, v] : summary)
    if (k == name) return v;
  throw DomainError("no summary entry '" + name + "'");
}

void SweepResult::validate() const {
  std::size_t expected = 1;
  for (const auto& axis : axes) {
    for (std::size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i] > axis[i - 1])) throw DomainError(kind + ": axis not strictly increasing");
    expected *= axis.size();
  }
  for (const auto& c : columns)
    if (c.values.size() != expected) throw DomainError(kind + ": column '" + c.name + "' has wrong length");
  if (!matrices.empty() && matrices.size() != expected) throw DomainError(kind + ": one rate matrix per point");
}

std::string rate_label(const std::string& x, const std::string& xp) { return "R_" + x + xp; }

double ratio_identity_error(const SystemSpec& system, const phantom::RateMatrix& m) {
  const std::size_t n = m.size();
  double worst = 0.0;
  for (double r : m.entries)
    if (r < 0.0 || !std::isfinite(r)) return std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t yp = 0; yp < n; ++yp) {
      if (m.at(y, yp) == 0.0) continue;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t xp = 0; xp < n; ++xp) {
          const double got = phantom::rate_ratio(m, x, xp, y, yp);
          const double want = phantom::predicted_ratio(system, x, xp, y, yp);
          const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
          worst = std::max(worst, err);
        }
    }
  return worst;
}

SystemSpec with_decay_rates(const SystemSpec& base, const std::vector<PerBand<double>>& rates) {
  if (rates.size() != base.channels.size()) throw DomainError("with_decay_rates: one entry per channel");
  SystemSpec s = base;
  for (std::size_t i = 0; i < rates.size(); ++i) s.channels[i].decay_rate = rates[i];
  return s;
}

SweepResult sweep_sigma(const attenuation::AttenuationModel& base, const CwPump& pump,
                        const std::vector<double>& sigmas, const SweepOptions& opts) {
  base.validate();
  if (base.ids.size() != 1) throw DomainError("sweep_sigma: expects a single-bus ring");
  const std::size_t n = sigmas.size();
  std::vector<double> rate(n), eta(n);
  const double L = base.length();
  parallel_for(n, opts.threads, [&](std::size_t i) {
    auto m = base;
    m.sigma[0] = uniform(sigmas[i]);
    rate[i] = attenuation::pair_rate_cw(m, pump, 0, 0, opts.rate).value;
    const double v = m.bands.pump.group_velocity;
    const double go = gamma_from_sigma(sigmas[i], v, L), gp = phantom_gamma_from_xi(m.xi, v);
    eta[i] = go / (go + gp);
  });

  SweepResult r;
  r.kind = "sweep-sigma";
  r.strategy = "attenuation";
  r.axis_names = {"sigma"};
  r.axes = {sigmas};
  r.columns = {{"sigma", sigmas}, {"eta_equivalent", eta}, {rate_label(base.ids[0], base.ids[0]), rate}};
  if (n > 0) {
    const std::size_t k = argmax(rate);
    const double smax = quadratic_peak(sigmas, rate, k);
    auto m = base;
    m.sigma[0] = uniform(smax);
    const double v = m.bands.pump.group_velocity;
    const double go = gamma_from_sigma(smax, v, L), gp = phantom_gamma_from_xi(m.xi, v);
    r.summary = {{"sigma_max", smax},
                 {"R_max", std::max(rate[k], attenuation::pair_rate_cw(m, pump, 0, 0, opts.rate).value)},
                 {"a", roundtrip_amplitude(base.xi, L)},
                 {"eta_at_sigma_max", go / (go + gp)}};
  }
  r.validate();
  return r;
}

SweepResult sweep_eta(const SystemSpec& base, const CwPump& pump, const std::vector<double>& etas,
                      const SweepOptions& opts) {
  base.validate();
  const auto [o, ph] = single_bus(base);
  if (!ph) throw DomainError("sweep_eta: needs a phantom channel");
  for (double e : etas)
    if (!(e > 0.0 && e < 1.0)) throw DomainError("sweep_eta: eta must lie in (0, 1)");

  const std::size_t n = etas.size(), nc = base.channels.size();
  std::vector<phantom::RateMatrix> mats(n);
  std::vector<double> ratio_err(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    std::vector<PerBand<double>> rates(nc);
    for (std::size_t c = 0; c < nc; ++c) rates[c] = base.channels[c].decay_rate;
    for (Band b : kAllBands) rates[o][b] = etas[i] / (1.0 - etas[i]) * rates[*ph][b];
    const auto s = with_decay_rates(base, rates);
    mats[i] = phantom::rate_matrix(s, pump);
    ratio_err[i] = ratio_identity_error(s, mats[i]);
  });

  SweepResult r;
  r.kind = "sweep-eta";
  r.strategy = "phantom";
  r.axis_names = {"eta"};
  r.axes = {etas};
  r.columns.push_back({"eta", etas});
  const auto labels = all_labels(base);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    Column c{labels[k], std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) c.values[i] = mats[i].entries[k];
    r.columns.push_back(std::move(c));
  }
  if (n > 0) {
    const auto& roo = r.column(rate_label(base.channels[o].id, base.channels[o].id)).values;
    const std::size_t k = argmax(roo);
    r.summary = {{"eta_max", quadratic_peak(etas, roo, k)},
                 {"R_max", roo[k]},
                 {"max_ratio_error", *std::max_element(ratio_err.begin(), ratio_err.end())}};
  }
  r.matrices = std::move(mats);
  r.validate();
  return r;
}

SweepResult compare_finesse(const SystemSpec& base_in, const CwPump& pump, const std::vector<double>& finesses,
                            const SweepOptions& opts) {
  const SystemSpec base = ensure_phantom(base_in);
  base.validate();
  const auto [o, ph] = single_bus(base);
  const double L = base.ring.circumference();
  const double v = base.bands.pump.group_velocity;
  const double sigma0 = sigma_from_gamma(base.channels[o].decay_rate.pump, v, L);
  const double a0 = base.ring.roundtrip_amplitude();
  if (!(a0 < 1.0)) throw DomainError("compare_finesse: base ring must be lossy");
  const double ratio = (1.0 - sigma0) / (1.0 - a0);

  const std::size_t n = finesses.size();
  std::vector<double> sig(n), loss(n), r1(n), r2(n), diff(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    const double target = constants::pi / finesses[i];  // (1 - sigma) + xi L / 2
    double lo = 0.0, hi = 2.0 * target / L;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double a = std::exp(-0.5 * mid * L);
      (ratio * (1.0 - a) + 0.5 * mid * L < target ? lo : hi) = mid;
    }
    const double xi = 0.5 * (lo + hi);
    const double sigma = 1.0 - ratio * (1.0 - std::exp(-0.5 * xi * L));
    RingSpec ring = base.ring;
    ring.loss_db_per_cm = db_per_cm_from_xi(xi);
    const auto m = attenuation::AttenuationModel::ring_channel(ring, base.bands, sigma, base.channels[o].id);
    r1[i] = attenuation::pair_rate_cw(m, pump, 0, 0, opts.rate).value;

    SystemSpec s = base;
    s.ring = ring;
    for (Band b : kAllBands) {
      const double vb = base.bands[b].group_velocity;
      s.channels[o].decay_rate[b] = gamma_from_sigma(sigma, vb, L);
      s.channels[*ph].decay_rate[b] = phantom_gamma_from_xi(xi, vb);
    }
    r2[i] = phantom::pair_rate_cw(s, pump, o, o);
    sig[i] = sigma;
    loss[i] = ring.loss_db_per_cm;
    diff[i] = rel_diff(r1[i], r2[i]);
  });

  SweepResult r;
  r.kind = "compare-finesse";
  r.strategy = "both";
  r.axis_names = {"finesse"};
  r.axes = {finesses};
  const std::string lab = rate_label(base.channels[o].id, base.channels[o].id);
  r.columns = {{"finesse", finesses},
               {"sigma", sig},
               {"loss_db_per_cm", loss},
               {lab + "_attenuation", r1},
               {lab + "_phantom", r2},
               {"rel_diff", diff}};
  double worst_high = 0.0;
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (finesses[i] >= 1000.0) worst_high = std::max(worst_high, std::abs(diff[i]));
    if (finesses[i] >= 50.0) {
      if (std::abs(diff[i]) > prev) monotone = false;
      prev = std::abs(diff[i]);
    }
  }
  r.summary = {{"base_sigma_over_loss_ratio", ratio},
               {"max_abs_rel_diff_finesse_ge_1000", worst_high},
               {"monotone_beyond_50", monotone ? 1.0 : 0.0}};
  r.validate();
  return r;
}

SweepResult compare_finesse_add_drop(const SystemSpec& base_in, const CwPump& pump, double sigma1,
                                     const std::vector<double>& sigma2s, const SweepOptions& opts) {
  const SystemSpec base = ensure_phantom(base_in);
  base.validate();
  const auto phys = base.physical_indices();
  if (phys.size() != 2) throw DomainError("compare_finesse_add_drop: expects two physical channels");
  const std::size_t t = base.pump_index();
  const std::size_t d = phys[0] == t ? phys[1] : phys[0];
  const std::size_t p = *base.phantom_index();
  const double L = base.ring.circumference(), xi = base.ring.attenuation();
  const std::array<std::size_t, 2> ch{t, d};

  const std::size_t n = sigma2s.size();
  std::vector<double> fin(n);
  std::vector<std::array<double, 4>> r1(n), r2(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    attenuation::AttenuationModel m;
    m.ring = base.ring;
    m.bands = base.bands;
    m.xi = xi;
    m.ids = {base.channels[t].id, base.channels[d].id};
    m.sigma = {uniform(sigma1), uniform(sigma2s[i])};
    SystemSpec s = base;
    for (Band b : kAllBands) {
      const double vb = base.bands[b].group_velocity;
      s.channels[t].decay_rate[b] = gamma_from_sigma(sigma1, vb, L);
      s.channels[d].decay_rate[b] = gamma_from_sigma(sigma2s[i], vb, L);
      s.channels[p].decay_rate[b] = phantom_gamma_from_xi(xi, vb);
    }
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) {
        r1[i][2 * x + y] = attenuation::pair_rate_cw(m, pump, x, y, opts.rate).value;
        r2[i][2 * x + y] = phantom::pair_rate_cw(s, pump, ch[x], ch[y]);
      }
    fin[i] = finesse(s);
  });

  SweepResult r;
  r.kind = "compare-finesse-add-drop";
  r.strategy = "both";
  r.axis_names = {"sigma2"};
  r.axes = {sigma2s};
  r.columns = {{"sigma2", sigma2s}, {"finesse", fin}};
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const std::string lab = rate_label(base.channels[ch[x]].id, base.channels[ch[y]].id);
      Column c1{lab + "_attenuation", {}}, c2{lab + "_phantom", {}}, c3{"rel_diff_" + lab, {}};
      for (std::size_t i = 0; i < n; ++i) {
        c1.values.push_back(r1[i][2 * x + y]);
        c2.values.push_back(r2[i][2 * x + y]);
        c3.values.push_back(rel_diff(r1[i][2 * x + y], r2[i][2 * x + y]));
      }
      r.columns.push_back(std::move(c1));
      r.columns.push_back(std::move(c2));
      r.columns.push_back(std::move(c3));
    }
  r.summary = {{"sigma1", sigma1}};
  r.validate();
  return r;
}

SweepResult add_drop_grid(const SystemSpec& base, const CwPump& pump, const std::vector<double>& t_ratios,
                          const std::vector<double>& d_ratios, const SweepOptions& opts) {
  base.validate();
  const auto phys = base.physical_indices();
  const auto ph = base.phantom_index();
  if (phys.size() != 2 || !ph) throw DomainError("add_drop_grid: needs through, drop and phantom channels");
  const std::size_t t = base.pump_index();
  const std::size_t d = phys[0] == t ? phys[1] : phys[0];
  const std::size_t nt = t_ratios.size(), nd = d_ratios.size(), nc = base.channels.size();

  auto system_at = [&](double tr, double dr) {
    std::vector<PerBand<double>> rates(nc);
    for (std::size_t c = 0; c < nc; ++c) rates[c] = base.channels[c].decay_rate;
    for (Band b : kAllBands) {
      rates[t][b] = tr * rates[*ph][b];
      rates[d][b] = dr * rates[*ph][b];
    }
    return with_decay_rates(base, rates);
  };

  std::vector<phantom::RateMatrix> mats(nt * nd);
  parallel_for(nt * nd, opts.threads, [&](std::size_t k) {
    mats[k] = phantom::rate_matrix(system_at(t_ratios[k / nd], d_ratios[k % nd]), pump);
  });

  SweepResult r;
  r.kind = "add-drop-grid";
  r.strategy = "phantom";
  r.axis_names = {"Gamma_T_over_Gamma_P", "Gamma_D_over_Gamma_P"};
  r.axes = {t_ratios, d_ratios};
  Column ct{"Gamma_T_over_Gamma_P", {}}, cd{"Gamma_D_over_Gamma_P", {}};
  for (std::size_t k = 0; k < nt * nd; ++k) {
    ct.values.push_back(t_ratios[k / nd]);
    cd.values.push_back(d_ratios[k % nd]);
  }
  r.columns = {std::move(ct), std::move(cd)};
  const auto labels = all_labels(base);
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < nt * nd; ++k)
    worst_ratio = std::max(worst_ratio, ratio_identity_error(system_at(t_ratios[k / nd], d_ratios[k % nd]), mats[k]));

  for (std::size_t e = 0; e < labels.size(); ++e) {
    Column c{labels[e], std::vector<double>(nt * nd)};
    for (std::size_t k = 0; k < nt * nd; ++k) c.values[k] = mats[k].entries[e];
    const std::size_t best = argmax(c.values);
    const std::size_t bi = best / nd, bj = best % nd;
    std::vector<double> row(nd), col(nt);
    for (std::size_t j = 0; j < nd; ++j) row[j] = c.values[bi * nd + j];
    for (std::size_t i = 0; i < nt; ++i) col[i] = c.values[i * nd + bj];
    const double tr = refine_log(t_ratios, col, bi), dr = refine_log(d_ratios, row, bj);
    const double refined = phantom::rate_matrix(system_at(tr, dr), pump).entries[e];
    r.summary.emplace_back("argmax_T_" + labels[e], tr);
    r.summary.emplace_back("argmax_D_" + labels[e], dr);
    r.summary.emplace_back("max_" + labels[e], std::max(c.values[best], refined));
    r.columns.push_back(std::move(c));
  }
  const std::string dd = rate_label(base.channels[d].id, base.channels[d].id);
  const std::size_t edd = d * nc + d;
  const double at_prose = phantom::rate_matrix(system_at(0.5, 1.0), pump).entries[edd];
  r.summary.emplace_back(dd + "_at_0.5_1.0_over_max", at_prose / r.summary_value("max_" + dd));
  r.summary.emplace_back("max_ratio_error", worst_ratio);
  r.matrices = std::move(mats);
  r.validate();
  return r;
}

std::pair<SystemSpec, CwPump> random_system(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  SystemSpec s;
  s.ring.radius = U(5e-6, 50e-6);
  s.ring.loss_db_per_cm = U(0.5, 30.0);
  s.ring.gamma_nl = U(10.0, 300.0);
  s.ring.delta_kappa = 0.0;
  const double wp = 2.0 * constants::pi * constants::speed_of_light / U(1500e-9, 1600e-9);
  const double spacing = U(0.5e12, 5e12);
  const PerBand<double> omega{wp, wp + spacing, wp - spacing + U(-2e9, 2e9)};
  for (Band b : kAllBands) {
    const double v = U(0.7e8, 2e8);
    s.bands[b] = {b, omega[b], v, U(1.5, 3.5) * omega[b] / constants::speed_of_light};
  }

  const int nphys = 1 + static_cast<int>(rng() % 3);
  for (int c = 0; c < nphys; ++c) {
    ChannelCoupling ch;
    ch.id = std::string(1, static_cast<char>('A' + c));
    for (Band b : kAllBands) {
      ch.decay_rate[b] = U(1e9, 5e10);
      if (c > 0 && rng() % 2) ch.group_velocity[b] = U(0.7e8, 2e8);
    }
    ch.coupling_phase = U(0.0, 2.0 * constants::pi);
    s.channels.push_back(ch);
  }
  ChannelCoupling p;
  p.id = "P";
  p.kind = ChannelKind::Phantom;
  const double xi = s.ring.attenuation();
  for (Band b : kAllBands) p.decay_rate[b] = phantom_gamma_from_xi(xi, s.bands[b].group_velocity);
  p.coupling_phase = U(0.0, 2.0 * constants::pi);
  s.channels.push_back(p);
  s.pump_channel = "A";

  CwPump pump{U(0.1e-3, 10e-3), wp + U(-1.0, 1.0) * s.total_decay_rate(Band::Pump)};
  s.validate();
  return {s, pump};
}

}  // namespace lrs::sweeps
