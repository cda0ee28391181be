#include "lrs/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "lrs/attenuation.hpp"
#include "lrs/errors.hpp"
#include "lrs/jsa.hpp"
#include "lrs/output.hpp"
#include "lrs/parallel.hpp"
#include "lrs/phantom.hpp"
#include "lrs/sweeps.hpp"

namespace lrs::io {
namespace fs = std::filesystem;

namespace {

// Bad input for this command: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::string command;
  RunConfig config;
  SystemSpec system;
  fs::path dir;
  unsigned threads = 1;
  std::ostream& out;
  ordered_json meta;
  bool ok = true;

  fs::path file(const std::string& suffix) const { return dir / (command + suffix); }

  void check(const std::string& name, double value, double limit, bool at_most = true) {
    const bool pass = at_most ? value <= limit : value >= limit;
    meta["checks"][name] = {{"value", value}, {"limit", limit}, {"pass", pass}};
    ok = ok && pass;
  }
};

double rel(double a, double b) { return b == 0.0 ? (a == 0.0 ? 0.0 : INFINITY) : (a - b) / b; }

CwPump require_cw(const Context& c) {
  if (c.config.pump.pulsed) throw UsageError(c.command + " needs a cw pump (pump.type = \"cw\")");
  return cw_pump(c.config);
}

std::vector<std::string> labels(const SystemSpec& s) {
  std::vector<std::string> out;
  for (const auto& x : s.channels)
    for (const auto& y : s.channels) out.push_back(sweeps::rate_label(x.id, y.id));
  return out;
}

sweeps::SweepOptions sweep_options(const Context& c) {
  sweeps::SweepOptions o;
  o.threads = c.threads;
  o.rate.rel_tol = c.config.tolerances.rate_rel_tol;
  o.rate.window_linewidths = c.config.tolerances.window_linewidths;
  return o;
}

void cmd_rate(Context& c) {
  const CwPump pump = require_cw(c);
  const auto& s = c.system;
  const auto labs = labels(s);
  const Strategy st = c.config.strategy;
  Table t;
  t.header = {"strategy"};
  t.header.insert(t.header.end(), labs.begin(), labs.end());

  std::map<std::string, double> s1, s2;
  if (st != Strategy::Phantom) {
    const auto m = attenuation::AttenuationModel::from_system(s);
    attenuation::RateOptions ro{c.config.tolerances.window_linewidths, c.config.tolerances.rate_rel_tol};
    double worst = 0.0;
    for (std::size_t x = 0; x < m.ids.size(); ++x)
      for (std::size_t y = 0; y < m.ids.size(); ++y) {
        const auto r = attenuation::pair_rate_cw(m, pump, x, y, ro);
        s1[sweeps::rate_label(m.ids[x], m.ids[y])] = r.value;
        if (r.value > 0.0) worst = std::max(worst, r.abs_error / r.value);
      }
    std::vector<Cell> row{std::string("attenuation")};
    for (const auto& l : labs) {
      if (s1.count(l)) row.emplace_back(s1[l]);
      else row.emplace_back(std::string());
    }
    t.rows.push_back(row);
    c.meta["achieved"]["attenuation_rel_error_estimate"] = worst;
  }
  if (st != Strategy::Attenuation) {
    const auto m = phantom::rate_matrix(s, pump);
    std::vector<Cell> row{std::string("phantom")};
    for (std::size_t k = 0; k < labs.size(); ++k) {
      s2[labs[k]] = m.entries[k];
      row.emplace_back(m.entries[k]);
    }
    t.rows.push_back(row);
    const std::size_t in = s.pump_index();
    const double fp = std::norm(phantom::enhancement_F(s, in, Band::Pump, s.wavenumber(in, Band::Pump),
                                                       phantom::Sign::Minus).value);
    c.meta["phantom"] = {{"F_pump_abs2", fp}, {"P_vac_W", m.p_vac}};
    const std::string lab = sweeps::rate_label(s.channels[in].id, s.channels[in].id);
    c.meta["phantom"]["note"] =
        "closed-form " + lab + " = " + format_double(s2[lab]) +
        " pairs/s; dividing by |F_pump|^2 (i.e. using the squared instead of the fourth power of the pump "
        "enhancement) gives " + format_double(s2[lab] / fp) + " pairs/s";
    c.out << lab << " (phantom): " << format_double(s2[lab]) << " pairs/s\n";
  }
  if (st == Strategy::Both) {
    for (const auto& [l, v1] : s1) {
      c.meta["comparison"][l] = {{"attenuation", v1}, {"phantom", s2[l]}, {"rel_diff", rel(v1, s2[l])}};
      c.out << l << ": attenuation " << format_double(v1) << ", phantom " << format_double(s2[l])
            << ", relative difference " << format_double(rel(v1, s2[l])) << "\n";
    }
  } else if (st == Strategy::Attenuation) {
    for (const auto& [l, v1] : s1) c.out << l << " (attenuation): " << format_double(v1) << " pairs/s\n";
  }
  write_csv(c.file(".csv"), t);
}

void cmd_ratios(Context& c) {
  const CwPump pump = require_cw(c);
  const auto& s = c.system;
  const auto m = phantom::rate_matrix(s, pump);
  const std::size_t in = s.pump_index();
  const std::string ref = s.channels[in].id + s.channels[in].id;
  Table t;
  t.header = {"pair", "R_numerator", "R_denominator", "ratio", "predicted", "rel_error"};
  double worst = 0.0;
  const std::size_t n = s.channels.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double got = phantom::rate_ratio(m, x, y, in, in);
      const double want = phantom::predicted_ratio(s, x, y, in, in);
      const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
      worst = std::max(worst, err);
      t.rows.push_back({s.channels[x].id + s.channels[y].id + "/" + ref, m.at(x, y), m.at(in, in), got, want, err});
      c.out << s.channels[x].id << s.channels[y].id << "/" << ref << " = " << format_double(got) << "\n";
    }
  worst = std::max(worst, sweeps::ratio_identity_error(s, m));
  c.check("ratio_identity", worst, c.config.tolerances.ratio_identity);
  write_csv(c.file(".csv"), t);
}

void finish_sweep(Context& c, const sweeps::SweepResult& r) {
  c.meta["summary"] = summary_json(r);
  write_csv(c.file(".csv"), sweep_table(r));
  for (const auto& [k, v] : r.summary) c.out << k << " = " << format_double(v) << "\n";
}

void cmd_sweep_sigma(Context& c) {
  const CwPump pump = require_cw(c);
  const auto m = attenuation::AttenuationModel::from_system(c.system);
  if (m.ids.size() != 1) throw UsageError("sweep-sigma needs exactly one physical channel");
  for (double s : c.config.sweep_sigma.values())
    if (!(s > 0.0 && s <= 1.0)) throw UsageError("sweep_sigma range must lie in (0, 1]");
  finish_sweep(c, sweeps::sweep_sigma(m, pump, c.config.sweep_sigma.values(), sweep_options(c)));
}

void cmd_sweep_eta(Context& c) {
  const CwPump pump = require_cw(c);
  if (c.system.physical_indices().size() != 1) throw UsageError("sweep-eta needs exactly one physical channel");
  const auto r = sweeps::sweep_eta(c.system, pump, c.config.sweep_eta.values(), sweep_options(c));
  c.check("ratio_identity", r.summary_value("max_ratio_error"), c.config.tolerances.ratio_identity);
  finish_sweep(c, r);
}

void cmd_compare_finesse(Context& c) {
  const CwPump pump = require_cw(c);
  const auto phys = c.system.physical_indices();
  if (phys.size() == 1) {
    finish_sweep(c, sweeps::compare_finesse(c.system, pump, c.config.compare_finesse.values(), sweep_options(c)));
  } else if (phys.size() == 2) {
    const std::size_t t = c.system.pump_index();
    const double sigma1 = sigma_from_gamma(c.system.channels[t].decay_rate.pump, c.system.group_velocity(t, Band::Pump),
                                           c.system.ring.circumference());
    finish_sweep(c, sweeps::compare_finesse_add_drop(c.system, pump, sigma1, c.config.compare_sigma2.values(),
                                                     sweep_options(c)));
  } else {
    throw UsageError("compare-finesse needs one or two physical channels");
  }
}

void cmd_add_drop_grid(Context& c) {
  const CwPump pump = require_cw(c);
  if (c.system.physical_indices().size() != 2) throw UsageError("add-drop-grid needs two physical channels");
  const auto axis = c.config.add_drop_grid.values();
  const auto r = sweeps::add_drop_grid(c.system, pump, axis, axis, sweep_options(c));
  c.check("ratio_identity", r.summary_value("max_ratio_error"), c.config.tolerances.ratio_identity);
  finish_sweep(c, r);
}

std::size_t channel_or_first(const SystemSpec& s, const std::string& id) {
  if (!id.empty()) return s.index_of(id);
  return s.physical_indices().front();
}

void cmd_jsa(Context& c) {
  if (!c.config.pump.pulsed) throw UsageError("jsa needs a pulsed pump (pump.type = \"pulsed\")");
  const PulsedPump pulse = pulsed_pump(c.config);
  const auto& s = c.system;
  phantom::GridSpec g{c.config.jsa.n, c.config.jsa.kappa_min, c.config.jsa.kappa_max};
  phantom::JsaOptions o;
  o.g_rel_tol = c.config.tolerances.jsa_g_rel_tol;
  o.max_residual = 0.0;  // checked below so the files are still written
  o.threads = c.threads;
  const auto grid = phantom::compute_jsa(s, pulse, g, channel_or_first(s, c.config.jsa.ref_signal),
                                         channel_or_first(s, c.config.jsa.ref_idler), o);

  Table t;
  t.header = {"kappa1", "kappa2", "abs2", "phase"};
  t.rows.reserve(grid.values.size());
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) {
      const auto v = grid.values[i * g.n + j];
      t.rows.push_back({grid.kappa1[i], grid.kappa2[j], std::norm(v), std::arg(v)});
    }
  write_csv(c.file(".csv"), t);

  Table w;
  w.header = {"pair", "weight_re", "weight_im", "weight_abs2", "measure"};
  for (const auto& pw : grid.weights)
    w.rows.push_back({s.channels[pw.signal].id + s.channels[pw.idler].id, pw.weight.real(), pw.weight.imag(),
                      std::norm(pw.weight), pw.measure});
  write_csv(c.file("_weights.csv"), w);

  c.meta["jsa"] = {{"n", g.n},
                   {"kappa_min", g.kappa_min},
                   {"kappa_max", g.kappa_max},
                   {"reference_pair", s.channels[grid.ref_signal].id + s.channels[grid.ref_idler].id},
                   {"beta2", grid.beta2},
                   {"normalization", grid.normalization},
                   {"values_units", "abs2 of phi for the reference pair in m^2; phase in rad"}};
  c.check("normalization_residual", grid.residual, c.config.tolerances.jsa_max_residual);
  c.out << "beta^2 = " << format_double(grid.beta2) << ", normalization residual = " << format_double(grid.residual)
        << "\n";

  PulsedPump cw_like = pulse;
  cw_like.duration_fwhm = c.config.jsa.cw_check_duration_ps * 1e-12;
  const double frac = phantom::energy_line_mass_fraction(s, cw_like, c.config.jsa.cw_check_half_width * cw_like.bandwidth(), o);
  c.meta["cw_limit"] = {{"duration_ps", c.config.jsa.cw_check_duration_ps},
                        {"half_width_bandwidths", c.config.jsa.cw_check_half_width}};
  c.check("cw_limit_mass_fraction", frac, 0.99, false);
  c.out << "cw-limit mass fraction = " << format_double(frac) << "\n";
}

void cmd_oracle_check(Context& c) {
  const CwPump pump = require_cw(c);
  const std::size_t nsys = 1 + c.config.oracle.random_systems;
  std::vector<std::pair<SystemSpec, CwPump>> systems(nsys);
  systems[0] = {c.system, pump};
  for (std::size_t i = 1; i < nsys; ++i) systems[i] = sweeps::random_system(c.config.oracle.seed + i - 1);

  struct Row {
    std::string sys, x, y;
    double closed, oracle, dev;
  };
  std::vector<std::vector<Row>> rows(nsys);
  const double tol = c.config.tolerances.oracle_rel_tol;
  parallel_for(nsys, c.threads, [&](std::size_t i) {
    const auto& [s, p] = systems[i];
    const std::string name = i == 0 ? "config" : "random_" + std::to_string(c.config.oracle.seed + i - 1);
    for (std::size_t x = 0; x < s.channels.size(); ++x)
      for (std::size_t y = 0; y < s.channels.size(); ++y) {
        const double cf = phantom::pair_rate_cw(s, p, x, y);
        const double orc = phantom::fgr_rate_oracle(s, p, x, y, tol).value;
        const double dev = cf == 0.0 ? std::abs(orc) : std::abs(orc - cf) / cf;
        rows[i].push_back({name, s.channels[x].id, s.channels[y].id, cf, orc, dev});
      }
  });
  Table t;
  t.header = {"system", "signal", "idler", "closed_form", "oracle", "rel_dev"};
  double worst = 0.0;
  for (const auto& rs : rows)
    for (const auto& r : rs) {
      t.rows.push_back({r.sys, r.x, r.y, r.closed, r.oracle, r.dev});
      worst = std::max(worst, r.dev);
    }
  write_csv(c.file(".csv"), t);
  c.check("max_rel_dev", worst, c.config.tolerances.oracle_agreement);
  c.out << "max relative deviation closed form vs oracle: " << format_double(worst) << "\n";
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"rate", cmd_rate},           {"ratios", cmd_ratios},
      {"sweep-sigma", cmd_sweep_sigma}, {"sweep-eta", cmd_sweep_eta},
      {"compare-finesse", cmd_compare_finesse}, {"add-drop-grid", cmd_add_drop_grid},
      {"jsa", cmd_jsa},             {"oracle-check", cmd_oracle_check}};
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"rate",          "ratios", "sweep-sigma", "sweep-eta",
                                              "compare-finesse", "add-drop-grid", "jsa", "oracle-check"};
  return names;
}

int run_command(const std::string& command, const RunConfig& config_in, const RunOptions& opts, std::ostream& out,
                std::ostream& err) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    err << "error: unknown command '" << command << "'\n";
    return 2;
  }
  RunConfig config = config_in;
  if (opts.rel_tol) config.tolerances.rate_rel_tol = *opts.rel_tol;

  try {
    Context c{command, config, build_system(config), opts.out_dir.value_or(fs::path(config.output_dir)),
              opts.threads, out, ordered_json::object(), true};
    c.meta["command"] = command;
    c.meta["config_hash"] = config_hash(config);
    c.meta["strategy"] = strategy_name(config.strategy);
    c.meta["derived"] = derived_parameters(config);
    c.meta["tolerances"] = ordered_json::parse(serialize_config(config))["tolerances"];
    it->second(c);
    c.meta["passed"] = c.ok;
    write_json(c.file(".json"), c.meta);
    if (!c.ok) {
      err << "error: " << command << ": tolerance check failed (see " << c.file(".json").string() << ")\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const QuadratureError& e) {
    err << "error: " << command << ": quadrature did not converge: " << e.what()
        << " (achieved abs error " << format_double(e.achieved_abs_error()) << ")\n";
    return 1;
  } catch (const GridResolutionError& e) {
    err << "error: " << command << ": " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << command << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lrs::io
