#include "wwlab/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wwlab/dipole.hpp"
#include "wwlab/io.hpp"

namespace ww {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double unset = std::numeric_limits<double>::quiet_NaN();
constexpr double max_steps = 5e7;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config, preset, cutoff, sweep, out;
  double eps = unset, omega_max = unset, nu = unset, D = unset, dt = unset, t_end = unset;
  // per-command
  std::string history, scheme, engine;
  double t_mem = unset, tau_max = unset, span = unset;
  int stride = 0, points = 201, n_modes = 0;
};

void add_common(CLI::App* app, Flags& f)
{
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--preset", f.preset, "hydrogen-scaled | hydrogen | hydrogen-rounded");
  app->add_option("--cutoff", f.cutoff, "none | exponential | sharp | ap_shape");
  app->add_option("--eps", f.eps, "cutoff time eps");
  app->add_option("--omega-max", f.omega_max, "sharp cutoff frequency");
  app->add_option("--nu", f.nu, "transition frequency");
  app->add_option("--D", f.D, "coupling constant");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--t-end", f.t_end, "final time");
  app->add_option("--sweep", f.sweep, "key=v1,v2,...");
  app->add_option("--out", f.out, "output directory");
}

void write_file(const fs::path& path, const std::string& content)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << content;
}

template <typename Writer>
void write_file_with(const fs::path& path, Writer w)
{
  std::ostringstream os;
  w(os);
  write_file(path, os.str());
}

RunConfig build_config(const Flags& f)
{
  RunConfig cfg;
  if (!f.preset.empty()) {
    if (f.preset == "hydrogen-scaled") cfg.params = hydrogen_scaled_preset();
    else if (f.preset == "hydrogen") cfg.params = hydrogen_preset();
    else if (f.preset == "hydrogen-rounded") cfg.params = hydrogen_preset(HydrogenCoupling::Rounded);
    else throw ConfigError("unknown preset '" + f.preset + "'");
  }
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw ConfigError("cannot read config " + f.config);
    std::stringstream ss;
    ss << is.rdbuf();
    json j;
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = parse_config(j, cfg);
  }
  if (!std::isnan(f.nu)) cfg.params.nu = f.nu;
  if (!std::isnan(f.D)) cfg.params.D = f.D;
  apply_cutoff_overrides(cfg, f.cutoff, f.eps, f.omega_max);
  if (!std::isnan(f.dt)) cfg.solver.dt = f.dt;
  if (!std::isnan(f.t_end)) cfg.solver.t_end = f.t_end;
  if (!std::isnan(f.t_mem)) cfg.solver.t_mem = f.t_mem;
  if (!f.history.empty()) cfg.solver.history = parse_config(json{{"solver", {{"history", f.history}}}}, cfg).solver.history;
  if (!f.scheme.empty()) cfg.solver.scheme = parse_config(json{{"solver", {{"scheme", f.scheme}}}}, cfg).solver.scheme;
  if (!f.engine.empty()) cfg.engine = parse_config(json{{"solver", {{"engine", f.engine}}}}, cfg).engine;
  if (f.n_modes) cfg.n_modes = f.n_modes;
  if (!std::isnan(f.span)) cfg.omega_hi = f.span;
  if (f.stride) cfg.outputs.stride = f.stride;
  if (!f.out.empty()) cfg.outputs.dir = f.out;
  if (!f.sweep.empty()) cfg.sweep = parse_sweep(f.sweep);
  validate(cfg.params);
  if (cfg.n_modes < 2) throw ConfigError("need at least two modes");
  if (cfg.outputs.stride < 1) throw ConfigError("stride must be >= 1");
  std::error_code ec;
  fs::create_directories(cfg.outputs.dir, ec);
  if (ec || !fs::is_directory(cfg.outputs.dir))
    throw ConfigError("cannot create output directory " + cfg.outputs.dir);
  return cfg;
}

int worker_count()
{
  int n = int(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = n > 0 ? std::min(n, cap) : cap;
  }
  return std::max(n, 1);
}

struct Rescaled {
  AtomFieldParams p; // nu == 1
  double nu;         // frequency unit of the caller
};

Rescaled rescale(const AtomFieldParams& p) { return {to_dimensionless(p), p.nu}; }

void scale_summary(MarkovSummary& s, double nu)
{
  s.a *= nu;
  s.b *= nu;
  s.gamma_eff *= nu;
  s.shift *= nu;
  s.shift_leading *= nu;
}

json simulate_point(const RunConfig& cfg, const fs::path& trace_path, const fs::path& summary_path,
                    const json& annotations)
{
  if (!is_integrable(cfg.params.cutoff))
    throw Error(ErrorKind::DivergentKernel, "no cutoff: the memory kernel is not finite");
  const Rescaled r = rescale(cfg.params);
  MarkovSummary ms = markov_summary(r.p);

  SolverConfig sc = cfg.solver;
  sc.dt = sc.dt > 0 ? sc.dt * r.nu : 0.1 * time_scale(r.p.cutoff);
  sc.t_end = sc.t_end > 0 ? sc.t_end * r.nu : 3.0 / ms.gamma_eff;
  if (sc.history != HistoryMode::Full) sc.t_mem = sc.t_mem > 0 ? sc.t_mem * r.nu : default_memory(r.p);
  if (!(sc.t_end / sc.dt < max_steps))
    throw ConfigError("run needs more than 5e7 steps; use --preset hydrogen-scaled or a shorter --t-end");

  AmplitudeTrace trace;
  json extra = json::object();
  if (cfg.engine == Engine::Volterra) {
    trace = solve(r.p, sc);
  } else {
    const double hi = cfg.omega_hi > 0 ? cfg.omega_hi * r.nu : default_span(r.p);
    const ModeSet m = discretize(r.p, cfg.n_modes, 0.0, hi);
    const double dt = std::min(sc.dt, max_mode_step(r.p, m));
    ModeRun run = solve_modes(r.p, m, sc.t_end, dt);
    trace = std::move(run.trace);
    extra["max_norm_drift"] = run.max_norm_drift;
    extra["n_modes"] = m.count();
  }

  json fit = nullptr;
  try {
    FitResult f = fit_exponential(trace, r.p);
    f.gamma_fit *= r.nu;
    f.shift_fit *= r.nu;
    f.window_start /= r.nu;
    f.window_end /= r.nu;
    fit = to_json(f);
  } catch (const Error& e) {
    extra["fit_error"] = std::string(e.name());
  }
  trace.times /= r.nu;

  scale_summary(ms, r.nu);
  SolverConfig echo = sc;
  echo.dt /= r.nu;
  echo.t_end /= r.nu;
  echo.t_mem /= r.nu;

  json summary;
  summary["params"] = to_json(cfg.params);
  summary["solver"] = to_json(echo);
  summary["solver"]["engine"] = cfg.engine == Engine::Volterra ? "volterra" : "modes";
  summary["markov"] = to_json(ms);
  summary["fit"] = fit;
  summary["validity"] = std::holds_alternative<ExponentialCutoff>(cfg.params.cutoff)
                            ? to_json(validity_report(cfg.params))
                            : json(nullptr);
  summary["samples"] = trace.size();
  for (auto& [k, v] : extra.items()) summary[k] = v;
  for (auto& [k, v] : annotations.items()) summary[k] = v;

  write_file_with(trace_path, [&](std::ostream& os) { write_trace_csv(os, trace, cfg.outputs.stride); });
  write_file(summary_path, summary.dump(2) + "\n");
  return summary;
}

// The scaled preset keeps hydrogen's structure but not its ratios; echo the real ones.
json hydrogen_reference()
{
  const AtomFieldParams h = hydrogen_preset();
  const AtomFieldParams r = hydrogen_preset(HydrogenCoupling::Rounded);
  json j;
  j["gamma_over_nu"] = gamma(h) / h.nu;
  j["gamma_over_nu_rounded_D"] = gamma(r) / r.nu;
  j["validity"] = to_json(validity_report(h));
  return j;
}

int cmd_simulate(const RunConfig& cfg, const json& annotations, std::ostream& out)
{
  const fs::path dir = cfg.outputs.dir;
  if (!cfg.sweep) {
    simulate_point(cfg, dir / "trace.csv", dir / "summary.json", annotations);
    out << "wrote " << (dir / "trace.csv").string() << " and " << (dir / "summary.json").string() << "\n";
    return 0;
  }
  const SweepAxis& axis = *cfg.sweep;
  const std::size_t n = axis.values.size();
  std::vector<double> gamma_fit(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::exception_ptr> failures(n);
  std::vector<RunConfig> points(n, cfg);
  for (std::size_t i = 0; i < n; ++i) {
    points[i].sweep.reset();
    set_parameter(points[i], axis.key, axis.values[i]);
    validate(points[i].params);
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const std::string tag = axis.key + "_" + std::to_string(i);
        const json s = simulate_point(points[i], dir / ("trace_" + tag + ".csv"), dir / ("summary_" + tag + ".json"), annotations);
        if (!s["fit"].is_null()) gamma_fit[i] = s["fit"]["gamma_fit"].get<double>();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(worker_count(), int(n));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  write_file_with(dir / "sweep.csv", [&](std::ostream& os) {
    os << axis.key << ",gamma_fit\n";
    for (std::size_t i = 0; i < n; ++i) os << format_double(axis.values[i]) << ',' << format_double(gamma_fit[i]) << '\n';
  });
  out << "wrote " << n << " sweep points and " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

int cmd_kernel(const RunConfig& cfg, const Flags& f, std::ostream& out)
{
  const CutoffSpec& spec = cfg.params.cutoff;
  if (!is_integrable(spec)) throw Error(ErrorKind::DivergentKernel, "no cutoff: the memory kernel is not finite");
  const double tau_max = std::isnan(f.tau_max) ? 20.0 * time_scale(spec) : f.tau_max;
  if (!(tau_max > 0) || f.points < 2) throw ConfigError("kernel table needs tau-max > 0 and at least 2 points");
  std::vector<double> taus(f.points);
  std::vector<cplx> values(f.points);
  for (int i = 0; i < f.points; ++i) {
    taus[i] = tau_max * double(i) / double(f.points - 1);
    values[i] = kernel_value(spec, taus[i]);
  }
  const fs::path path = fs::path(cfg.outputs.dir) / "kernel.csv";
  write_file_with(path, [&](std::ostream& os) { write_kernel_csv(os, taus, values); });
  out << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_modes(const RunConfig& cfg, std::ostream& out)
{
  if (!is_integrable(cfg.params.cutoff))
    throw Error(ErrorKind::DivergentIntegral, "no cutoff: the mode continuum carries infinite weight");
  const Rescaled r = rescale(cfg.params);
  const MarkovSummary ms = markov_summary(r.p);
  const double hi = cfg.omega_hi > 0 ? cfg.omega_hi * r.nu : default_span(r.p);
  ModeSet m = discretize(r.p, cfg.n_modes, 0.0, hi);
  const double t_end = cfg.solver.t_end > 0 ? cfg.solver.t_end * r.nu : 3.0 / ms.gamma_eff;
  double dt = max_mode_step(r.p, m);
  if (cfg.solver.dt > 0) dt = std::min(dt, cfg.solver.dt * r.nu);
  if (!(t_end / dt < max_steps)) throw ConfigError("mode run needs more than 5e7 steps");
  ModeRun run = solve_modes(r.p, m, t_end, dt);

  Eigen::Index peak = 0;
  const Eigen::VectorXd density = run.final_state.c_g.cwiseAbs2().cwiseQuotient(m.quad_weights);
  density.maxCoeff(&peak);

  // back to the caller's frequency unit
  m.omegas *= r.nu;
  m.quad_weights *= r.nu;
  m.weights *= r.nu * r.nu;
  run.trace.times /= r.nu;

  const fs::path dir = cfg.outputs.dir;
  write_file_with(dir / "modes.csv", [&](std::ostream& os) { write_modes_csv(os, m); });
  write_file_with(dir / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, m, run.final_state); });
  write_file_with(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, run.trace, cfg.outputs.stride); });
  json s;
  s["params"] = to_json(cfg.params);
  s["n_modes"] = m.count();
  s["dt"] = dt / r.nu;
  s["t_end"] = t_end / r.nu;
  s["max_norm_drift"] = run.max_norm_drift;
  s["peak_omega"] = m.omegas(peak);
  s["line_center"] = cfg.params.nu - ms.shift * r.nu;
  s["markov"] = to_json(ms);
  write_file(dir / "summary.json", s.dump(2) + "\n");
  out << "wrote modes.csv, spectrum.csv, trace.csv, summary.json to " << dir.string() << "\n";
  return 0;
}

int cmd_appendix(const RunConfig& cfg, std::ostream& out)
{
  const double q = si::elementary_charge;
  const double a0 = si::bohr_radius, c = si::speed_of_light;
  const double nu = hydrogen_nu() * c / a0;
  const double eps = 10.0 * a0 / c;
  const double omega = 2.0 * nu;
  const SelfEnergyResult sharp = self_energy_sharp(q, omega);
  const SelfEnergyResult smooth = self_energy_smooth(q, eps);
  json j;
  j["angular_factor"] = angular_factor();
  j["hydrogen_r2_a0sq"] = {{"ground", HydrogenR2::ground}, {"excited", HydrogenR2::excited}, {"off_diagonal", HydrogenR2::off_diagonal}};
  j["self_energy"] = {{"omega_cut", omega},
                      {"eps", eps},
                      {"sharp_coefficient", sharp.coefficient},
                      {"smooth_coefficient", smooth.coefficient},
                      {"ratio", sharp.coefficient / smooth.coefficient},
                      {"ratio_identity", std::pow(omega * eps, 3) / 6.0}};
  j["smooth_shift_over_nu"] = hydrogen_smooth_shift_ratio(10.0);
  j["smooth_angular_normalization_k0"] = smooth_angular_normalization(eps, 0.0);
  json cmp = json::array();
  for (double w : {nu, nu / 10.0, nu / 1000.0}) {
    const MatrixElementComparison m = compare_ap_er(q, nu, w, hydrogen_dipole() * a0);
    const DiagonalEnergies ap = diagonal_energies_ap(q, w);
    const DiagonalEnergies er = diagonal_energies_er(w, smooth.energy(HydrogenR2::ground * a0 * a0));
    cmp.push_back({{"omega_k", w},
                   {"ap_element", m.ap_element},
                   {"er_element", m.er_element},
                   {"ratio", m.ratio},
                   {"ap_diagonal", {{"photon", ap.photon}, {"inverse_frequency", ap.frequency_dependent}}},
                   {"er_diagonal", {{"photon", er.photon}, {"constant", er.constant}}}});
  }
  j["ap_vs_er"] = cmp;
  const fs::path path = fs::path(cfg.outputs.dir) / "appendix.json";
  write_file(path, j.dump(2) + "\n");
  out << "wrote " << path.string() << "\n";
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Wigner-Weisskopf decay with a frequency cutoff"};
  app.require_subcommand(1);
  Flags f;
  auto* sim = app.add_subcommand("simulate", "solve for c_e(t) and fit the decay");
  auto* ker = app.add_subcommand("kernel", "tabulate the memory kernel");
  auto* mod = app.add_subcommand("modes", "discrete-mode run and emitted spectrum");
  auto* apx = app.add_subcommand("appendix", "dipole self-energy and A.p vs E.r report");
  for (auto* s : {sim, ker, mod, apx}) add_common(s, f);
  sim->add_option("--history", f.history, "full | truncated | compressed");
  sim->add_option("--t-mem", f.t_mem, "memory length for truncated/compressed history");
  sim->add_option("--scheme", f.scheme, "trapezoid | rk4");
  sim->add_option("--engine", f.engine, "volterra | modes");
  sim->add_option("--n", f.n_modes, "mode count for the modes engine");
  sim->add_option("--stride", f.stride, "write every n-th sample");
  ker->add_option("--tau-max", f.tau_max, "largest tau");
  ker->add_option("--points", f.points, "number of tau points");
  mod->add_option("--n", f.n_modes, "number of modes");
  mod->add_option("--span", f.span, "upper frequency of the mode span");
  mod->add_option("--stride", f.stride, "write every n-th sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = build_config(f);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "ConfigError: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      json notes = json::object();
      if (f.preset == "hydrogen-scaled") notes["hydrogen_reference"] = hydrogen_reference();
      return cmd_simulate(cfg, notes, out);
    }
    if (ker->parsed()) return cmd_kernel(cfg, f, out);
    if (mod->parsed()) return cmd_modes(cfg, out);
    return cmd_appendix(cfg, out);
  } catch (const ConfigError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "SolverError: " << e.what() << "\n";
    return 3;
  }
}

} // namespace ww
