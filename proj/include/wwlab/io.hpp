#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wwlab/kernel.hpp"
#include "wwlab/markov.hpp"
#include "wwlab/modes.hpp"
#include "wwlab/params.hpp"
#include "wwlab/volterra.hpp"

namespace ww {

// Scientific notation, 17 significant digits, '.' decimal separator.
std::string format_double(double v);

void write_trace_csv(std::ostream& os, const AmplitudeTrace& trace, int stride = 1);
void write_kernel_csv(std::ostream& os, const std::vector<double>& taus, const std::vector<cplx>& values);
void write_modes_csv(std::ostream& os, const ModeSet& m);
void write_spectrum_csv(std::ostream& os, const ModeSet& m, const FullState& s);

struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

struct OutputSpec {
  std::string dir = ".";
  int stride = 1;
};

enum class Engine { Volterra, Modes };

struct RunConfig {
  AtomFieldParams params = hydrogen_scaled_preset();
  SolverConfig solver; // dt = 0 / t_end = 0 / t_mem = 0 mean "derive from params"
  Engine engine = Engine::Volterra;
  int n_modes = 500;
  double omega_hi = 0.0; // 0: default span
  OutputSpec outputs;
  std::optional<SweepAxis> sweep;
};

// Throws ww::Error(InvalidArgument) on malformed input. Accepts nested objects or dotted keys.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const nlohmann::json& j, RunConfig base);
nlohmann::json config_to_json(const RunConfig& cfg);
std::string serialize_config(const RunConfig& cfg);

// Sets a sweepable key (eps, omega_max, nu, D, dt, t_end) on a config.
void set_parameter(RunConfig& cfg, const std::string& key, double value);
bool is_sweep_key(const std::string& key);

// Applies command-line cutoff overrides; empty kind / NaN values leave the config as is.
// Parameters already present in the config are kept when only the kind changes.
void apply_cutoff_overrides(RunConfig& cfg, const std::string& kind, double eps, double omega_max);
SweepAxis parse_sweep(const std::string& text);

std::string_view history_name(HistoryMode h);
std::string_view scheme_name(Scheme s);

nlohmann::json to_json(const AtomFieldParams& p);
nlohmann::json to_json(const SolverConfig& s);
nlohmann::json to_json(const MarkovSummary& s);
nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const ValidityReport& v);

} // namespace ww
