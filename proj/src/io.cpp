#include "wwlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ww {

using nlohmann::json;

std::string format_double(double v)
{
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const AmplitudeTrace& trace, int stride)
{
  os << "t,re_c,im_c,norm_sq\n";
  for (Eigen::Index i = 0; i < trace.size(); i += std::max(stride, 1))
    os << format_double(trace.times(i)) << ',' << format_double(trace.c_e(i).real()) << ','
       << format_double(trace.c_e(i).imag()) << ',' << format_double(trace.norm_sq(i)) << '\n';
}

void write_kernel_csv(std::ostream& os, const std::vector<double>& taus, const std::vector<cplx>& values)
{
  os << "tau,re,im\n";
  for (std::size_t i = 0; i < taus.size(); ++i)
    os << format_double(taus[i]) << ',' << format_double(values[i].real()) << ','
       << format_double(values[i].imag()) << '\n';
}

void write_modes_csv(std::ostream& os, const ModeSet& m)
{
  os << "omega,weight\n";
  for (Eigen::Index j = 0; j < m.count(); ++j)
    os << format_double(m.omegas(j)) << ',' << format_double(m.weights(j)) << '\n';
}

void write_spectrum_csv(std::ostream& os, const ModeSet& m, const FullState& s)
{
  os << "omega,population,density\n";
  for (Eigen::Index j = 0; j < m.count(); ++j) {
    const double pop = std::norm(s.c_g(j));
    os << format_double(m.omegas(j)) << ',' << format_double(pop) << ','
       << format_double(pop / m.quad_weights(j)) << '\n';
  }
}

std::string_view history_name(HistoryMode h)
{
  switch (h) {
  case HistoryMode::Full: return "full";
  case HistoryMode::Truncated: return "truncated";
  case HistoryMode::Compressed: return "compressed";
  }
  return "full";
}

std::string_view scheme_name(Scheme s)
{
  return s == Scheme::TrapezoidProduct ? "trapezoid" : "rk4";
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

HistoryMode parse_history(const std::string& s)
{
  if (s == "full") return HistoryMode::Full;
  if (s == "truncated") return HistoryMode::Truncated;
  if (s == "compressed") return HistoryMode::Compressed;
  bad("unknown history mode '" + s + "'");
}

Scheme parse_scheme(const std::string& s)
{
  if (s == "trapezoid") return Scheme::TrapezoidProduct;
  if (s == "rk4") return Scheme::RK4Volterra;
  bad("unknown scheme '" + s + "'");
}

UnitSystem parse_units(const std::string& s)
{
  if (s == "dimensionless") return UnitSystem::Dimensionless;
  if (s == "atomic_hydrogen") return UnitSystem::AtomicHydrogen;
  bad("unknown unit system '" + s + "'");
}

std::string_view units_name(UnitSystem u)
{
  return u == UnitSystem::Dimensionless ? "dimensionless" : "atomic_hydrogen";
}

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out)
{
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) flatten(*it, key, out);
    else out[key] = *it;
  }
}

double number(const json& v, const std::string& key)
{
  if (!v.is_number()) bad("key '" + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& key)
{
  if (!v.is_string()) bad("key '" + key + "' must be a string");
  return v.get<std::string>();
}

// flat view of a cutoff so kind changes keep previously given parameters
struct CutoffFields {
  CutoffKind kind = CutoffKind::None;
  double eps = 0.0, omega_max = 0.0, nu_ref = 0.0;
};

CutoffFields fields_of(const CutoffSpec& s)
{
  CutoffFields f;
  f.kind = kind_of(s);
  if (auto* e = std::get_if<ExponentialCutoff>(&s)) f.eps = e->eps;
  if (auto* h = std::get_if<SharpCutoff>(&s)) f.omega_max = h->omega_max;
  if (auto* a = std::get_if<ApShapeCutoff>(&s)) {
    f.eps = a->eps;
    f.nu_ref = a->nu_ref;
  }
  return f;
}

CutoffSpec build(const CutoffFields& f, double nu)
{
  switch (f.kind) {
  case CutoffKind::None: return NoCutoff{};
  case CutoffKind::Exponential: return exponential_cutoff(f.eps);
  case CutoffKind::Sharp: return sharp_cutoff(f.omega_max);
  case CutoffKind::ApShape: return ap_shape_cutoff(f.eps, f.nu_ref > 0 ? f.nu_ref : nu);
  }
  return NoCutoff{};
}

} // namespace

bool is_sweep_key(const std::string& key)
{
  return key == "eps" || key == "omega_max" || key == "nu" || key == "D" || key == "dt" || key == "t_end";
}

void set_parameter(RunConfig& cfg, const std::string& key, double value)
{
  CutoffFields f = fields_of(cfg.params.cutoff);
  if (key == "eps") {
    f.eps = value;
    if (f.kind == CutoffKind::None || f.kind == CutoffKind::Sharp) f.kind = CutoffKind::Exponential;
    cfg.params.cutoff = build(f, cfg.params.nu);
  } else if (key == "omega_max") {
    f.omega_max = value;
    f.kind = CutoffKind::Sharp;
    cfg.params.cutoff = build(f, cfg.params.nu);
  } else if (key == "nu") {
    cfg.params.nu = value;
  } else if (key == "D") {
    cfg.params.D = value;
  } else if (key == "dt") {
    cfg.solver.dt = value;
  } else if (key == "t_end") {
    cfg.solver.t_end = value;
  } else {
    bad("unknown parameter key '" + key + "'");
  }
}

void apply_cutoff_overrides(RunConfig& cfg, const std::string& kind, double eps, double omega_max)
{
  CutoffFields f = fields_of(cfg.params.cutoff);
  if (!kind.empty()) f.kind = parse_kind(kind);
  if (!std::isnan(eps)) f.eps = eps;
  if (!std::isnan(omega_max)) f.omega_max = omega_max;
  if (kind.empty() && f.kind == CutoffKind::None && !std::isnan(eps)) f.kind = CutoffKind::Exponential;
  if (kind.empty() && f.kind != CutoffKind::Sharp && !std::isnan(omega_max)) f.kind = CutoffKind::Sharp;
  if (f.kind == CutoffKind::ApShape && !(f.eps > 0))
    f.eps = std::get<ApShapeCutoff>(ap_shape_for(cfg.params)).eps;
  if (f.kind == CutoffKind::Sharp && !(f.omega_max > 0)) bad("sharp cutoff needs omega_max");
  if (f.kind == CutoffKind::Exponential && !(f.eps > 0) && std::isnan(eps)) bad("exponential cutoff needs eps");
  cfg.params.cutoff = build(f, cfg.params.nu);
}

SweepAxis parse_sweep(const std::string& s)
{
  const auto eq = s.find('=');
  if (eq == std::string::npos) bad("sweep must look like key=v1,v2,...");
  SweepAxis axis;
  axis.key = s.substr(0, eq);
  if (!is_sweep_key(axis.key)) bad("unknown sweep key '" + axis.key + "'");
  std::stringstream ss(s.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      axis.values.push_back(std::stod(item, &used));
      if (used != item.size()) bad("bad sweep value '" + item + "'");
    } catch (const std::logic_error&) {
      bad("bad sweep value '" + item + "'");
    }
  }
  if (axis.values.empty()) bad("sweep needs at least one value");
  return axis;
}

RunConfig parse_config(const json& j, RunConfig cfg)
{
  if (!j.is_object()) bad("config root must be an object");
  std::map<std::string, json> flat;
  flatten(j, "", flat);
  CutoffFields f = fields_of(cfg.params.cutoff);
  std::optional<SweepAxis> sweep = cfg.sweep;
  for (const auto& [key, v] : flat) {
    if (key == "nu") cfg.params.nu = number(v, key);
    else if (key == "D") cfg.params.D = number(v, key);
    else if (key == "units") cfg.params.units = parse_units(text(v, key));
    else if (key == "cutoff.kind") f.kind = parse_kind(text(v, key));
    else if (key == "cutoff.eps") f.eps = number(v, key);
    else if (key == "cutoff.omega_max") f.omega_max = number(v, key);
    else if (key == "cutoff.nu_ref") f.nu_ref = number(v, key);
    else if (key == "solver.dt") cfg.solver.dt = number(v, key);
    else if (key == "solver.t_end") cfg.solver.t_end = number(v, key);
    else if (key == "solver.t_mem") cfg.solver.t_mem = number(v, key);
    else if (key == "solver.history") cfg.solver.history = parse_history(text(v, key));
    else if (key == "solver.scheme") cfg.solver.scheme = parse_scheme(text(v, key));
    else if (key == "solver.engine") {
      const std::string e = text(v, key);
      if (e == "volterra") cfg.engine = Engine::Volterra;
      else if (e == "modes") cfg.engine = Engine::Modes;
      else bad("unknown engine '" + e + "'");
    } else if (key == "modes.n") cfg.n_modes = int(number(v, key));
    else if (key == "modes.omega_hi") cfg.omega_hi = number(v, key);
    else if (key == "output.dir") cfg.outputs.dir = text(v, key);
    else if (key == "output.stride") cfg.outputs.stride = int(number(v, key));
    else if (key == "sweep.key") {
      if (!sweep) sweep.emplace();
      sweep->key = text(v, key);
    } else if (key == "sweep.values") {
      if (!v.is_array()) bad("sweep.values must be an array");
      if (!sweep) sweep.emplace();
      sweep->values.clear();
      for (const auto& x : v) sweep->values.push_back(number(x, key));
    } else bad("unknown config key '" + key + "'");
  }
  if (sweep) {
    if (!is_sweep_key(sweep->key)) bad("unknown sweep key '" + sweep->key + "'");
    if (sweep->values.empty()) bad("sweep needs at least one value");
  }
  cfg.sweep = sweep;
  cfg.params.cutoff = build(f, cfg.params.nu);
  validate(cfg.params);
  if (cfg.outputs.stride < 1) bad("output.stride must be >= 1");
  if (cfg.n_modes < 2) bad("modes.n must be >= 2");
  return cfg;
}

RunConfig parse_config(const std::string& s)
{
  json j;
  try {
    j = json::parse(s);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, RunConfig{});
}

json to_json(const AtomFieldParams& p)
{
  json c;
  const CutoffFields f = fields_of(p.cutoff);
  c["kind"] = std::string(kind_name(f.kind));
  if (f.kind == CutoffKind::Exponential || f.kind == CutoffKind::ApShape) c["eps"] = f.eps;
  if (f.kind == CutoffKind::Sharp) c["omega_max"] = f.omega_max;
  if (f.kind == CutoffKind::ApShape) c["nu_ref"] = f.nu_ref;
  return json{{"nu", p.nu}, {"D", p.D}, {"units", std::string(units_name(p.units))}, {"cutoff", c}};
}

json to_json(const SolverConfig& s)
{
  return json{{"dt", s.dt},
              {"t_end", s.t_end},
              {"t_mem", s.t_mem},
              {"history", std::string(history_name(s.history))},
              {"scheme", std::string(scheme_name(s.scheme))}};
}

json config_to_json(const RunConfig& cfg)
{
  json j = to_json(cfg.params);
  j["solver"] = to_json(cfg.solver);
  j["solver"]["engine"] = cfg.engine == Engine::Volterra ? "volterra" : "modes";
  j["modes"] = json{{"n", cfg.n_modes}, {"omega_hi", cfg.omega_hi}};
  j["output"] = json{{"dir", cfg.outputs.dir}, {"stride", cfg.outputs.stride}};
  if (cfg.sweep) j["sweep"] = json{{"key", cfg.sweep->key}, {"values", cfg.sweep->values}};
  return j;
}

std::string serialize_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

json to_json(const MarkovSummary& s)
{
  return json{{"a", s.a},
              {"b", s.b},
              {"gamma_eff", s.gamma_eff},
              {"shift", s.shift},
              {"shift_leading", s.shift_leading},
              {"star_ratios", {s.rate_ratio, s.lamb_ratio}},
              {"star_ok", s.star_ok}};
}

json to_json(const FitResult& f)
{
  return json{{"gamma_fit", f.gamma_fit},
              {"shift_fit", f.shift_fit},
              {"fit_window", {f.window_start, f.window_end}},
              {"residual_rms", f.residual_rms},
              {"samples", f.samples}};
}

json to_json(const ValidityReport& v)
{
  return json{{"lower_bound", v.lower_bound}, {"upper_bound", v.upper_bound},
              {"eps_scaled", v.eps_scaled},   {"lower_margin", v.lower_margin},
              {"upper_margin", v.upper_margin}, {"lamb_ratio", v.lamb_ratio},
              {"rate_ratio", v.rate_ratio},   {"star_threshold", v.star_threshold},
              {"window_ok", v.window_ok},     {"star_ok", v.star_ok}};
}

} // namespace ww
