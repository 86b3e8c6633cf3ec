#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wwlab/cli.hpp"
#include "wwlab/io.hpp"

using namespace ww;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args)
{
  args.insert(args.begin(), "wwlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("wwlab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(slurp(p));
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST_CASE("simulate smoke")
{
  const fs::path d = scratch("smoke");
  const Result r = run({"simulate", "--preset", "hydrogen-scaled", "--out", d.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(d / "trace.csv"));
  const json s = json::parse(slurp(d / "summary.json"));
  for (const char* k : {"params", "solver", "markov", "fit", "validity", "hydrogen_reference"}) CHECK(s.contains(k));
  CHECK(s["markov"]["gamma_eff"].get<double>() == doctest::Approx(4.6546e-3).epsilon(1e-4));
  CHECK(s["hydrogen_reference"]["validity"]["eps_scaled"].get<double>() == 10.0);
  const auto rows = read_csv(d / "trace.csv");
  CHECK(rows[0] == std::vector<std::string>{"t", "re_c", "im_c", "norm_sq"});
  CHECK(rows.size() == s["samples"].get<std::size_t>() + 1);
}

TEST_CASE("determinism")
{
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run({"simulate", "--t-end", "100", "--out", a.string()}).code == 0);
  REQUIRE(run({"simulate", "--t-end", "100", "--out", b.string()}).code == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("divergence is a solver error")
{
  const fs::path d = scratch("none");
  const Result r = run({"simulate", "--cutoff", "none", "--out", d.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("DivergentKernel") != std::string::npos);
  const Result k = run({"kernel", "--cutoff", "none", "--out", d.string()});
  CHECK(k.code == 3);
  const Result m = run({"modes", "--cutoff", "none", "--out", d.string()});
  CHECK(m.code == 3);
  CHECK(m.err.find("DivergentIntegral") != std::string::npos);
}

TEST_CASE("configuration errors exit 2")
{
  const fs::path d = scratch("cfg");
  CHECK(run({"simulate", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"simulate", "--sweep", "foo=1,2", "--out", d.string()}).code == 2);
  CHECK(run({"simulate", "--eps", "-1", "--out", d.string()}).code == 2);
  CHECK(run({"simulate", "--preset", "helium", "--out", d.string()}).code == 2);
  CHECK(run({"simulate", "--cutoff", "sharp", "--out", d.string()}).code == 2);
  CHECK(run({"simulate", "--config", (d / "missing.json").string()}).code == 2);
  fs::create_directories(d);
  std::ofstream(d / "bad.json") << "{\"nu\": 1, \"colour\": 3}";
  const Result u = run({"simulate", "--config", (d / "bad.json").string(), "--out", d.string()});
  CHECK(u.code == 2);
  CHECK(u.err.find("colour") != std::string::npos);
  // too large a step is a solver error
  CHECK(run({"simulate", "--dt", "0.5", "--out", d.string()}).code == 3);
}

TEST_CASE("sweep files")
{
  const fs::path d = scratch("sweep");
  setenv("WW_THREADS", "2", 1);
  const Result r = run({"simulate", "--sweep", "eps=0.1,0.3,1.0", "--out", d.string()});
  REQUIRE(r.code == 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(fs::exists(d / ("trace_eps_" + std::to_string(i) + ".csv")));
    CHECK(fs::exists(d / ("summary_eps_" + std::to_string(i) + ".json")));
  }
  const auto rows = read_csv(d / "sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"eps", "gamma_fit"});
  CHECK(std::stod(rows[2][0]) == 0.3);
  const json s = json::parse(slurp(d / "summary_eps_2.json"));
  CHECK(std::stod(rows[3][1]) == s["fit"]["gamma_fit"].get<double>());
}

TEST_CASE("sweep follows the e^{-nu eps} law where the pole approximation holds")
{
  const fs::path d = scratch("law");
  REQUIRE(run({"simulate", "--D", "1e-4", "--history", "truncated", "--sweep", "eps=0.6,1.0,1.5", "--out", d.string()}).code == 0);
  const auto rows = read_csv(d / "sweep.csv");
  REQUIRE(rows.size() == 4);
  for (int i = 1; i <= 3; ++i) {
    const double eps = std::stod(rows[i][0]), g = std::stod(rows[i][1]);
    CHECK(g / (2.0 * M_PI * 1e-4 * std::exp(-eps)) == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("kernel table re-read")
{
  const fs::path d = scratch("kernel");
  REQUIRE(run({"kernel", "--eps", "0.1", "--tau-max", "2", "--out", d.string()}).code == 0);
  const auto rows = read_csv(d / "kernel.csv");
  REQUIRE(rows.size() == 202);
  CHECK(rows[0] == std::vector<std::string>{"tau", "re", "im"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double tau = std::stod(rows[i][0]);
    CHECK(tau == 2.0 * double(i - 1) / 200.0);
    const cplx k = kernel_analytic(0.1, tau);
    CHECK(rows[i][1] == format_double(k.real()));
    CHECK(rows[i][2] == format_double(k.imag()));
    CHECK(std::stod(rows[i][1]) == k.real());
  }
}

TEST_CASE("modes spectrum peak")
{
  const fs::path d = scratch("modes");
  REQUIRE(run({"modes", "--n", "50", "--out", d.string()}).code == 0);
  const auto rows = read_csv(d / "spectrum.csv");
  REQUIRE(rows.size() == 51);
  std::size_t best = 1;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][2]) > std::stod(rows[best][2])) best = i;
  const double peak = std::stod(rows[best][0]);
  const json s = json::parse(slurp(d / "summary.json"));
  const double line = s["line_center"].get<double>();
  CHECK(peak == s["peak_omega"].get<double>());
  CHECK(std::abs(peak - line) < 0.05);
  // one peak: density falls off on both sides of it
  CHECK(std::stod(rows[best][2]) > 10.0 * std::stod(rows[1][2]));
  CHECK(std::stod(rows[best][2]) > 10.0 * std::stod(rows[50][2]));
  CHECK(s["max_norm_drift"].get<double>() < 1e-9);
  CHECK(read_csv(d / "modes.csv").size() == 51);
}

TEST_CASE("appendix report")
{
  const fs::path d = scratch("appendix");
  REQUIRE(run({"appendix", "--out", d.string()}).code == 0);
  const json j = json::parse(slurp(d / "appendix.json"));
  CHECK(j["angular_factor"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(j["self_energy"]["ratio"].get<double>() ==
        doctest::Approx(j["self_energy"]["ratio_identity"].get<double>()).epsilon(1e-14));
  CHECK(j["ap_vs_er"][1]["ratio"].get<double>() == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("config file and round trip")
{
  const fs::path d = scratch("config");
  fs::create_directories(d);
  const std::string text = R"({"nu": 1.0, "D": 0.001, "cutoff": {"kind": "exponential", "eps": 0.5},
                               "solver.dt": 0.05, "solver.t_end": 50, "output": {"stride": 5}})";
  const RunConfig c = parse_config(text);
  CHECK(std::get<ExponentialCutoff>(c.params.cutoff).eps == 0.5);
  CHECK(c.solver.dt == 0.05);
  CHECK(c.outputs.stride == 5);
  const std::string once = serialize_config(c);
  const std::string twice = serialize_config(parse_config(once));
  CHECK(once == twice);
  CHECK(serialize_config(parse_config(twice)) == twice);

  std::ofstream(d / "run.json") << text;
  REQUIRE(run({"simulate", "--config", (d / "run.json").string(), "--out", d.string()}).code == 0);
  const auto rows = read_csv(d / "trace.csv");
  CHECK(rows.size() == 1 + 1000 / 5 + 1);
  // command-line flags override the file
  REQUIRE(run({"simulate", "--config", (d / "run.json").string(), "--eps", "0.6", "--out", d.string()}).code == 0);
  CHECK(json::parse(slurp(d / "summary.json"))["params"]["cutoff"]["eps"].get<double>() == 0.6);
}

TEST_CASE("hydrogen units")
{
  const fs::path d = scratch("hydrogen");
  const Result big = run({"simulate", "--preset", "hydrogen", "--out", d.string()});
  CHECK(big.code == 2);
  // a short hydrogen run is solved in scaled units and reported back in a0/c
  const Result r = run({"simulate", "--preset", "hydrogen", "--t-end", "2000", "--out", d.string()});
  REQUIRE(r.code == 0);
  const json s = json::parse(slurp(d / "summary.json"));
  CHECK(s["solver"]["dt"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s["params"]["units"] == "atomic_hydrogen");
  CHECK(s["validity"]["window_ok"].get<bool>());
}

TEST_CASE("installed binary")
{
  const fs::path d = scratch("binary");
  const std::string cmd = std::string(WWLAB_CLI_PATH) + " appendix --out " + d.string() + " > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(d / "appendix.json"));
  const std::string bad = std::string(WWLAB_CLI_PATH) + " simulate --cutoff none --out " + d.string() + " 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 3);
}
