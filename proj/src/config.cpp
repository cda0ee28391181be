#include "lrs/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lrs/constants.hpp"
#include "lrs/errors.hpp"
#include "lrs/numerics.hpp"

namespace lrs::io {
namespace {

constexpr const char* kBandKeys[3] = {"pump", "signal", "idler"};

// Field access with path-tagged errors and unknown-key detection.
class Obj {
 public:
  Obj(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const ordered_json& at(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(sub(key), "required field missing");
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> dflt = std::nullopt) {
    if (!has(key)) {
      if (dflt) return *dflt;
      throw ConfigError(sub(key), "required field missing");
    }
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(sub(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(sub(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, std::optional<double> dflt = std::nullopt) {
    const double x = number(key, dflt);
    if (!(x > 0.0)) throw ConfigError(sub(key), "must be positive");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t dflt) {
    if (!has(key)) return dflt;
    const auto& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(sub(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::string string(const std::string& key, std::optional<std::string> dflt = std::nullopt) {
    if (!has(key)) {
      if (dflt) return *dflt;
      throw ConfigError(sub(key), "required field missing");
    }
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(sub(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(sub(it.key()), "unknown field");
  }

 private:
  const ordered_json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// A number (same in every band) or {"pump": .., "signal": .., "idler": ..}.
PerBand<double> per_band(const ordered_json& v, const std::string& path) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x, x};
  }
  Obj o(v, path);
  PerBand<double> out;
  for (Band b : kAllBands) out[b] = o.number(kBandKeys[static_cast<int>(b)]);
  o.finish();
  return out;
}

ordered_json per_band_json(const PerBand<double>& v) {
  if (v.pump == v.signal && v.pump == v.idler) return v.pump;
  ordered_json j;
  for (Band b : kAllBands) j[kBandKeys[static_cast<int>(b)]] = v[b];
  return j;
}

Range parse_range(Obj& parent, const std::string& key, Range r) {
  if (!parent.has(key)) return r;
  Obj o(parent.at(key), parent.sub(key));
  r.min = o.number("min", r.min);
  r.max = o.number("max", r.max);
  r.points = o.count("points", r.points);
  if (o.has("log")) {
    const auto& v = o.at("log");
    if (!v.is_boolean()) throw ConfigError(o.sub("log"), "expected true or false");
    r.log = v.get<bool>();
  }
  o.finish();
  if (r.points < 1) throw ConfigError(o.path(), "need at least one point");
  if (!(r.max > r.min) && r.points > 1) throw ConfigError(o.path(), "max must exceed min");
  if (r.log && !(r.min > 0.0)) throw ConfigError(o.path(), "log range needs min > 0");
  return r;
}

ordered_json range_json(const Range& r) {
  return ordered_json{{"min", r.min}, {"max", r.max}, {"points", r.points}, {"log", r.log}};
}

const char* coupling_key(CouplingKind k) {
  switch (k) {
    case CouplingKind::Sigma: return "sigma";
    case CouplingKind::Gamma: return "Gamma";
    case CouplingKind::Q: return "Q";
    case CouplingKind::Eta: return "eta";
    default: return "";
  }
}

ChannelConfig parse_channel(const ordered_json& j, const std::string& path) {
  Obj o(j, path);
  ChannelConfig c;
  c.id = o.string("id");
  if (c.id.empty()) throw ConfigError(o.sub("id"), "must not be empty");
  const std::string kind = o.string("kind", "physical");
  if (kind == "physical") c.kind = ChannelKind::Physical;
  else if (kind == "phantom") c.kind = ChannelKind::Phantom;
  else throw ConfigError(o.sub("kind"), "expected \"physical\" or \"phantom\"");

  int given = 0;
  for (CouplingKind k : {CouplingKind::Sigma, CouplingKind::Gamma, CouplingKind::Q, CouplingKind::Eta}) {
    const char* key = coupling_key(k);
    if (!o.has(key)) continue;
    if (++given > 1) throw ConfigError(path, "over-specified coupling: give one of sigma, Gamma, Q, eta");
    c.coupling = k;
    c.value = per_band(o.at(key), o.sub(key));
  }
  if (given == 0 && c.kind == ChannelKind::Physical)
    throw ConfigError(path, "missing coupling: give one of sigma, Gamma, Q, eta");

  for (Band b : kAllBands) {
    const double x = c.value[b];
    const std::string p = o.sub(coupling_key(c.coupling));
    switch (c.coupling) {
      case CouplingKind::Sigma:
        if (!(x > 0.0 && x <= 1.0)) throw ConfigError(p, "sigma must lie in (0, 1]");
        break;
      case CouplingKind::Gamma:
        if (!(x >= 0.0)) throw ConfigError(p, "Gamma must be non-negative");
        break;
      case CouplingKind::Q:
        if (!(x > 0.0)) throw ConfigError(p, "Q must be positive");
        break;
      case CouplingKind::Eta:
        if (!(x >= 0.0 && x < 1.0)) throw ConfigError(p, "eta must lie in [0, 1)");
        break;
      default: break;
    }
  }

  if (o.has("group_velocity")) {
    const auto& v = o.at("group_velocity");
    const std::string p = o.sub("group_velocity");
    if (v.is_number()) {
      for (Band b : kAllBands) c.group_velocity[b] = v.get<double>();
    } else {
      Obj g(v, p);
      for (Band b : kAllBands)
        if (g.has(kBandKeys[static_cast<int>(b)])) c.group_velocity[b] = g.positive(kBandKeys[static_cast<int>(b)]);
      g.finish();
    }
    for (Band b : kAllBands)
      if (c.group_velocity[b] && !(*c.group_velocity[b] > 0.0)) throw ConfigError(p, "must be positive");
  }
  c.phase_rad = o.number("phase_rad", 0.0);
  o.finish();
  return c;
}

BandConfig parse_band(const ordered_json& j, const std::string& path, const BandConfig& dflt) {
  Obj o(j, path);
  BandConfig b = dflt;
  b.wavelength_nm = o.positive("wavelength_nm", dflt.wavelength_nm);
  b.n_eff = o.positive("n_eff", dflt.n_eff);
  if (o.has("group_velocity") && o.has("n_group"))
    throw ConfigError(path, "give group_velocity or n_group, not both");
  if (o.has("n_group")) b.group_velocity = constants::speed_of_light / o.positive("n_group");
  else b.group_velocity = o.positive("group_velocity", dflt.group_velocity);
  o.finish();
  return b;
}

double band_omega(const BandConfig& b) {
  return 2.0 * constants::pi * constants::speed_of_light / (b.wavelength_nm * 1e-9);
}

}  // namespace

const char* strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::Attenuation: return "attenuation";
    case Strategy::Phantom: return "phantom";
    default: return "both";
  }
}

std::vector<double> Range::values() const {
  if (points == 1) return {min};
  return log ? logspace(min, max, points) : linspace(min, max, points);
}

RunConfig parse_config(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  RunConfig c;
  Obj top(root, "");

  {
    Obj sys(top.at("system"), "system");
    {
      Obj ring(sys.at("ring"), "system.ring");
      c.ring.radius = ring.positive("radius_m");
      c.ring.loss_db_per_cm = ring.number("loss_db_per_cm");
      if (c.ring.loss_db_per_cm < 0.0) throw ConfigError("system.ring.loss_db_per_cm", "must be non-negative");
      c.ring.gamma_nl = ring.number("gamma_nl");
      c.ring.delta_kappa = ring.number("delta_kappa", 0.0);
      ring.finish();
    }
    {
      Obj bands(sys.at("bands"), "system.bands");
      BandConfig dflt;
      if (bands.has("default")) dflt = parse_band(bands.at("default"), "system.bands.default", dflt);
      for (Band b : kAllBands) {
        const std::string key = kBandKeys[static_cast<int>(b)];
        c.bands[b] = bands.has(key) ? parse_band(bands.at(key), "system.bands." + key, dflt) : dflt;
      }
      bands.finish();
    }
    const auto& chans = sys.at("channels");
    if (!chans.is_array()) throw ConfigError("system.channels", "expected an array");
    if (chans.empty()) throw ConfigError("system.channels", "at least one channel is required");
    std::set<std::string> seen;
    int phantoms = 0;
    for (std::size_t i = 0; i < chans.size(); ++i) {
      const std::string p = "system.channels[" + std::to_string(i) + "]";
      c.channels.push_back(parse_channel(chans[i], p));
      if (!seen.insert(c.channels.back().id).second) throw ConfigError(p + ".id", "duplicate channel id");
      if (c.channels.back().kind == ChannelKind::Phantom) ++phantoms;
    }
    if (phantoms > 1) throw ConfigError("system.channels", "at most one phantom channel");
    c.pump_channel = sys.string("pump_channel", c.channels.front().id);
    if (!seen.count(c.pump_channel)) throw ConfigError("system.pump_channel", "no such channel");
    sys.finish();
  }

  if (top.has("pump")) {
    Obj p(top.at("pump"), "pump");
    const std::string type = p.string("type", "cw");
    if (type == "cw") c.pump.pulsed = false;
    else if (type == "pulsed") c.pump.pulsed = true;
    else throw ConfigError("pump.type", "expected \"cw\" or \"pulsed\"");
    c.pump.power_mw = p.positive("power_mw", c.pump.power_mw);
    c.pump.duration_ps = p.positive("duration_ps", c.pump.duration_ps);
    c.pump.alpha = p.positive("alpha", c.pump.alpha);
    c.pump.detuning_rad_s = p.number("detuning_rad_s", 0.0);
    p.finish();
  }

  const std::string strat = top.string("strategy", "both");
  if (strat == "attenuation") c.strategy = Strategy::Attenuation;
  else if (strat == "phantom") c.strategy = Strategy::Phantom;
  else if (strat == "both") c.strategy = Strategy::Both;
  else throw ConfigError("strategy", "expected attenuation, phantom or both");

  if (top.has("tolerances")) {
    Obj t(top.at("tolerances"), "tolerances");
    auto& d = c.tolerances;
    d.rate_rel_tol = t.positive("rate_rel_tol", d.rate_rel_tol);
    d.oracle_rel_tol = t.positive("oracle_rel_tol", d.oracle_rel_tol);
    d.window_linewidths = t.positive("window_linewidths", d.window_linewidths);
    d.jsa_g_rel_tol = t.positive("jsa_g_rel_tol", d.jsa_g_rel_tol);
    d.jsa_max_residual = t.positive("jsa_max_residual", d.jsa_max_residual);
    d.ratio_identity = t.positive("ratio_identity", d.ratio_identity);
    d.oracle_agreement = t.positive("oracle_agreement", d.oracle_agreement);
    t.finish();
  }

  c.sweep_sigma = parse_range(top, "sweep_sigma", c.sweep_sigma);
  c.sweep_eta = parse_range(top, "sweep_eta", c.sweep_eta);
  c.compare_finesse = parse_range(top, "compare_finesse", c.compare_finesse);
  c.compare_sigma2 = parse_range(top, "compare_sigma2", c.compare_sigma2);
  c.add_drop_grid = parse_range(top, "add_drop_grid", c.add_drop_grid);

  if (top.has("jsa")) {
    Obj j(top.at("jsa"), "jsa");
    c.jsa.n = j.count("n", c.jsa.n);
    if (c.jsa.n < 2) throw ConfigError("jsa.n", "need at least 2 points");
    c.jsa.kappa_min = j.number("kappa_min", c.jsa.kappa_min);
    c.jsa.kappa_max = j.number("kappa_max", c.jsa.kappa_max);
    if (!(c.jsa.kappa_max > c.jsa.kappa_min)) throw ConfigError("jsa.kappa_max", "must exceed kappa_min");
    c.jsa.ref_signal = j.string("ref_signal", "");
    c.jsa.ref_idler = j.string("ref_idler", "");
    c.jsa.cw_check_duration_ps = j.positive("cw_check_duration_ps", c.jsa.cw_check_duration_ps);
    c.jsa.cw_check_half_width = j.positive("cw_check_half_width", c.jsa.cw_check_half_width);
    j.finish();
  }

  if (top.has("oracle")) {
    Obj o(top.at("oracle"), "oracle");
    c.oracle.random_systems = o.count("random_systems", c.oracle.random_systems);
    c.oracle.seed = o.count("seed", c.oracle.seed);
    o.finish();
  }

  if (top.has("output")) {
    Obj o(top.at("output"), "output");
    c.output_dir = o.string("dir", c.output_dir);
    o.finish();
  }
  top.finish();
  build_system(c);  // surfaces unresolvable couplings now
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  ordered_json sys;
  sys["ring"] = {{"radius_m", c.ring.radius},
                 {"loss_db_per_cm", c.ring.loss_db_per_cm},
                 {"gamma_nl", c.ring.gamma_nl},
                 {"delta_kappa", c.ring.delta_kappa}};
  for (Band b : kAllBands) {
    const auto& bc = c.bands[b];
    sys["bands"][kBandKeys[static_cast<int>(b)]] = {
        {"wavelength_nm", bc.wavelength_nm}, {"n_eff", bc.n_eff}, {"group_velocity", bc.group_velocity}};
  }
  sys["channels"] = ordered_json::array();
  for (const auto& ch : c.channels) {
    ordered_json j{{"id", ch.id}, {"kind", ch.kind == ChannelKind::Phantom ? "phantom" : "physical"}};
    if (ch.coupling != CouplingKind::FromLoss) j[coupling_key(ch.coupling)] = per_band_json(ch.value);
    ordered_json gv = ordered_json::object();
    for (Band b : kAllBands)
      if (ch.group_velocity[b]) gv[kBandKeys[static_cast<int>(b)]] = *ch.group_velocity[b];
    if (!gv.empty()) j["group_velocity"] = gv;
    j["phase_rad"] = ch.phase_rad;
    sys["channels"].push_back(j);
  }
  sys["pump_channel"] = c.pump_channel;

  ordered_json root;
  root["system"] = sys;
  root["pump"] = {{"type", c.pump.pulsed ? "pulsed" : "cw"},
                  {"power_mw", c.pump.power_mw},
                  {"duration_ps", c.pump.duration_ps},
                  {"alpha", c.pump.alpha},
                  {"detuning_rad_s", c.pump.detuning_rad_s}};
  root["strategy"] = strategy_name(c.strategy);
  const auto& t = c.tolerances;
  root["tolerances"] = {{"rate_rel_tol", t.rate_rel_tol},         {"oracle_rel_tol", t.oracle_rel_tol},
                        {"window_linewidths", t.window_linewidths}, {"jsa_g_rel_tol", t.jsa_g_rel_tol},
                        {"jsa_max_residual", t.jsa_max_residual},   {"ratio_identity", t.ratio_identity},
                        {"oracle_agreement", t.oracle_agreement}};
  root["sweep_sigma"] = range_json(c.sweep_sigma);
  root["sweep_eta"] = range_json(c.sweep_eta);
  root["compare_finesse"] = range_json(c.compare_finesse);
  root["compare_sigma2"] = range_json(c.compare_sigma2);
  root["add_drop_grid"] = range_json(c.add_drop_grid);
  root["jsa"] = {{"n", c.jsa.n},
                 {"kappa_min", c.jsa.kappa_min},
                 {"kappa_max", c.jsa.kappa_max},
                 {"ref_signal", c.jsa.ref_signal},
                 {"ref_idler", c.jsa.ref_idler},
                 {"cw_check_duration_ps", c.jsa.cw_check_duration_ps},
                 {"cw_check_half_width", c.jsa.cw_check_half_width}};
  root["oracle"] = {{"random_systems", c.oracle.random_systems}, {"seed", c.oracle.seed}};
  root["output"] = {{"dir", c.output_dir}};
  return root.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SystemSpec build_system(const RunConfig& c) {
  SystemSpec s;
  s.ring = c.ring;
  for (Band b : kAllBands) {
    const double w = band_omega(c.bands[b]);
    s.bands[b] = {b, w, c.bands[b].group_velocity, c.bands[b].n_eff * w / constants::speed_of_light};
  }
  const double L = s.ring.circumference();
  const double xi = s.ring.attenuation();

  std::vector<ChannelConfig> chans = c.channels;
  bool has_phantom = false;
  for (const auto& ch : chans) has_phantom |= ch.kind == ChannelKind::Phantom;
  if (!has_phantom) {
    ChannelConfig p;
    p.id = "P";
    for (const auto& ch : chans)
      if (ch.id == "P") throw ConfigError("system.channels", "no phantom listed and id \"P\" is taken");
    p.kind = ChannelKind::Phantom;
    chans.push_back(p);
  }

  for (std::size_t i = 0; i < chans.size(); ++i) {
    ChannelCoupling cc;
    cc.id = chans[i].id;
    cc.kind = chans[i].kind;
    cc.group_velocity = chans[i].group_velocity;
    cc.coupling_phase = chans[i].phase_rad;
    s.channels.push_back(cc);
  }

  // Everything except eta first; eta channels are fractions of the total.
  for (Band b : kAllBands) {
    double fixed = 0.0, eta_sum = 0.0;
    for (std::size_t i = 0; i < chans.size(); ++i) {
      const auto& ch = chans[i];
      const double v = ch.group_velocity[b].value_or(s.bands[b].group_velocity);
      double g = 0.0;
      switch (ch.coupling) {
        case CouplingKind::Sigma: g = gamma_from_sigma(ch.value[b], v, L); break;
        case CouplingKind::Gamma: g = ch.value[b]; break;
        case CouplingKind::Q: g = gamma_from_q(s.bands[b].omega, ch.value[b]); break;
        case CouplingKind::FromLoss: g = phantom_gamma_from_xi(xi, v); break;
        case CouplingKind::Eta: eta_sum += ch.value[b]; continue;
      }
      s.channels[i].decay_rate[b] = g;
      fixed += g;
    }
    if (eta_sum > 0.0) {
      if (!(eta_sum < 1.0)) throw ConfigError("system.channels", "escape efficiencies must sum to less than 1");
      if (!(fixed > 0.0))
        throw ConfigError("system.channels", "eta needs another channel (or ring loss) with a nonzero rate");
    }
    const double total = fixed / (1.0 - eta_sum);
    for (std::size_t i = 0; i < chans.size(); ++i)
      if (chans[i].coupling == CouplingKind::Eta) s.channels[i].decay_rate[b] = chans[i].value[b] * total;
  }
  s.pump_channel = c.pump_channel;
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError("system", e.what());
  }
  return s;
}

CwPump cw_pump(const RunConfig& c) {
  const double w = band_omega(c.bands.pump);
  return {c.pump.power_mw * 1e-3, w + c.pump.detuning_rad_s};
}

PulsedPump pulsed_pump(const RunConfig& c) {
  const double w = band_omega(c.bands.pump);
  return {c.pump.duration_ps * 1e-12, w + c.pump.detuning_rad_s, c.pump.alpha};
}

ordered_json derived_parameters(const RunConfig& c) {
  const SystemSpec s = build_system(c);
  const double L = s.ring.circumference();
  const double xi = s.ring.attenuation();
  ordered_json j;
  j["ring"] = {{"circumference_m", L}, {"xi_per_m", xi}, {"a", s.ring.roundtrip_amplitude()}};
  const auto ph = s.phantom_index();
  for (Band b : kAllBands) {
    const auto q = q_and_eta(s, b);
    ordered_json bj{{"omega_rad_s", s.bands[b].omega},
                    {"group_velocity_m_s", s.bands[b].group_velocity},
                    {"wavenumber_per_m", s.bands[b].wavenumber},
                    {"Gamma_bar_rad_s", q.total_decay_rate},
                    {"Q_load", q.q_loaded},
                    {"Q_int_from_loss", xi > 0.0 ? s.bands[b].omega / (xi * s.bands[b].group_velocity)
                                                 : std::numeric_limits<double>::infinity()},
                    {"finesse", finesse(s, b)}};
    if (ph) bj["Q_int"] = q.q_coupling[*ph];
    j["bands"][band_name(b)] = bj;
  }
  j["channels"] = ordered_json::array();
  for (std::size_t i = 0; i < s.channels.size(); ++i) {
    const auto& ch = s.channels[i];
    ordered_json cj{{"id", ch.id}, {"kind", ch.kind == ChannelKind::Phantom ? "phantom" : "physical"}};
    for (Band b : kAllBands) {
      const auto q = q_and_eta(s, b);
      const double v = s.group_velocity(i, b);
      cj["Gamma_rad_s"][band_name(b)] = ch.decay_rate[b];
      cj["Q"][band_name(b)] = q.q_coupling[i];
      cj["eta"][band_name(b)] = q.eta[i];
      if (ch.kind == ChannelKind::Physical) cj["sigma"][band_name(b)] = 1.0 - ch.decay_rate[b] * L / v;
    }
    j["channels"].push_back(cj);
  }
  return j;
}

}  // namespace lrs::io
