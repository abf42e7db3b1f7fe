#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

using namespace qdarp::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qdarp_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdarp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> rows(const std::string& path) {
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> out;
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) r.push_back(std::stod(f));
    out.push_back(r);
  }
  return out;
}

nlohmann::json meta(const std::string& output) { return nlohmann::json::parse(slurp(output + ".meta.json")); }

}  // namespace

TEST_CASE("command names") {
  for (auto c : {Command::Evolve, Command::Dressed, Command::Scan, Command::Ensemble, Command::Sweep,
                 Command::Thresholds}) {
    CHECK(command_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(command_from_string("plot"), ConfigError);
}

TEST_CASE("key registry") {
  const auto ev = keys_for(Command::Evolve);
  CHECK(std::find(ev.begin(), ev.end(), "area") != ev.end());
  CHECK(std::find(ev.begin(), ev.end(), "n-dots") == ev.end());
  const auto th = keys_for(Command::Thresholds);
  CHECK(std::find(th.begin(), th.end(), "level") != th.end());
  CHECK(std::find(th.begin(), th.end(), "tau0") == th.end());
  for (auto c : {Command::Evolve, Command::Dressed, Command::Scan, Command::Ensemble, Command::Sweep,
                 Command::Thresholds}) {
    const auto keys = keys_for(c);
    CHECK(std::find(keys.begin(), keys.end(), "output") != keys.end());
  }
}

TEST_CASE("config text formats") {
  auto kv = parse_config_text("# comment\narea = 2.5\n\nphi2=0.3  # trailing\n");
  CHECK(kv.size() == 2);
  CHECK(kv["area"] == "2.5");
  CHECK(kv["phi2"] == "0.3");
  CHECK_THROWS_AS(parse_config_text("area 2.5\n"), ConfigError);

  kv = parse_config_text(R"({"area": 2.5, "samples": 11, "sampling": "seeded-random"})");
  CHECK(kv["area"] == "2.5");
  CHECK(kv["samples"] == "11");
  CHECK(kv["sampling"] == "seeded-random");

  kv = parse_config_text(R"({"tool": "qdarp", "command": "evolve", "config": {"area": "3"}, "results": {}})");
  CHECK(kv.size() == 2);
  CHECK(kv["command"] == "evolve");
  CHECK(kv["area"] == "3");

  CHECK_THROWS_AS(parse_config_text("{\"area\": [1]}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{broken"), ConfigError);
}

TEST_CASE("strict config building") {
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"n-dots", "3"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"aera", "3"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"command", "sweep"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"area", "three"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"tau0", "0"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"area", "-1"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"t-span-factor", "2"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"norm-tol", "1e-3"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"samples", "1"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Evolve, {{"dipole-scale", "0"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Ensemble, {{"n-dots", "0"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Ensemble, {{"n-dots", "-4"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Ensemble, {{"sampling", "sobol"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Sweep, {{"preset", "huge"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Sweep, {{"phi2-points", "1"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Sweep, {{"workers", "0"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Scan, {{"kind", "three-dot"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Scan, {{"detunings", "1,,x"}}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Thresholds, {}), ConfigError);
  CHECK_THROWS_AS(build_config(Command::Thresholds, {{"input", "m.csv"}, {"level", "1"}}), ConfigError);

  const auto c = build_config(Command::Sweep, {{"fwhm-mev", "30"}, {"energy-mean-mev", "1060"}});
  CHECK(c.ensemble.energy_fwhm_mev == 30.0);
  CHECK(c.pulse.center_energy_mev == 1060.0);
  CHECK(c.grid.phi2_axis.size() == 61);
  CHECK(c.grid.area_axis.size() == 51);
  CHECK(c.workers == 0);
  CHECK(c.effective.at("preset") == "fig4");
  CHECK(c.effective.at("workers") == "auto");
  CHECK(c.effective.size() == keys_for(Command::Sweep).size());

  const auto sym = build_config(Command::Sweep, {{"preset", "symmetric"}, {"workers", "3"}});
  CHECK(sym.grid.phi2_axis.front() == -0.1);
  CHECK(sym.workers == 3);
}

TEST_CASE("evolve writes a trajectory ending inverted") {
  TempDir dir;
  const auto out = dir / "ev.csv";
  const auto r = cli({"evolve", "--area", "1", "--phi2", "0", "--detuning-mev", "0", "--samples", "51", "--output", out});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp(out).rfind("t_ps,re_c0,im_c0,re_c1,im_c1,occupation\n", 0) == 0);
  const auto data = rows(out);
  REQUIRE(data.size() == 51);
  CHECK(std::abs(data.back()[5] - 1.0) < 1e-6);
  const auto m = meta(out);
  CHECK(m.at("command") == "evolve");
  CHECK(m.at("config").at("tau0") == "0.12");
  CHECK(m.at("assumptions").dump().find("0.12 ps") != std::string::npos);
  CHECK(std::abs(m.at("results").at("final_occupation").get<double>() - 1.0) < 1e-6);
}

TEST_CASE("dressed example has its minimum gap at t = 0") {
  TempDir dir;
  const auto out = dir / "d.csv";
  REQUIRE(cli({"dressed", "--area", "2", "--phi2", "0.3", "--detuning-mev", "0", "--output", out}).code == kExitOk);
  CHECK(slurp(out).rfind("t_ps,E_minus_meV,E_plus_meV\n", 0) == 0);
  const auto data = rows(out);
  std::size_t imin = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data[i][2] == -data[i][1]);
    if (data[i][2] < data[imin][2]) imin = i;
  }
  CHECK(data[imin][0] == 0.0);
  CHECK(meta(out).at("results").at("min_gap_t_ps") == 0.0);
}

TEST_CASE("config file, flag override and meta round trip") {
  TempDir dir;
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "area = 3\nphi2 = 0.3\ndetuning-mev = 4\nsamples = 21\n";
  }
  const auto a = dir / "a.csv";
  REQUIRE(cli({"evolve", "--config", dir / "run.cfg", "--detuning-mev", "-4", "--output", a}).code == kExitOk);
  CHECK(meta(a).at("config").at("detuning-mev") == "-4");
  CHECK(meta(a).at("config").at("area") == "3");

  const auto b = dir / "b.csv";
  REQUIRE(cli({"evolve", "--config", a + ".meta.json", "--output", b}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));

  CHECK(cli({"sweep", "--config", a + ".meta.json"}).code == kExitConfig);
  CHECK(cli({"evolve", "--config", dir / "missing.cfg"}).code == kExitConfig);
}

TEST_CASE("sweep, determinism and thresholds") {
  TempDir dir;
  const std::vector<std::string> common{"sweep",        "--n-dots",      "13",          "--preset",
                                        "custom",       "--phi2-min",    "0",           "--phi2-max",
                                        "0.04",         "--phi2-points", "3",           "--area-min",
                                        "0",            "--area-max",    "1",           "--area-points",
                                        "5"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = common;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  const auto s1 = dir / "s1.csv";
  const auto s4 = dir / "s4.csv";
  REQUIRE(cli(with({"--workers", "1", "--output", s1})).code == kExitOk);
  REQUIRE(cli(with({"--workers", "4", "--output", s4})).code == kExitOk);
  CHECK(slurp(s1) == slurp(s4));
  CHECK(slurp(s1).rfind("phi2_ps2,area_pi,occupation\n", 0) == 0);
  const auto m = meta(s1);
  CHECK(m.at("ensemble").at("n_dots") == 13);
  CHECK(m.at("grid").at("phi2_axis").size() == 3);
  CHECK(m.at("version") == m.at("version"));

  const auto s_rt = dir / "rt.csv";
  REQUIRE(cli({"sweep", "--config", s1 + ".meta.json", "--output", s_rt}).code == kExitOk);
  CHECK(slurp(s1) == slurp(s_rt));

  const auto th = dir / "th.csv";
  const auto r = cli({"thresholds", "--input", s1, "--level", "0.99", "--output", th});
  CHECK(r.code == kExitNotFound);
  CHECK_FALSE(r.err.empty());
  CHECK(fs::exists(th + ".contour.csv"));
  CHECK(meta(th).at("results").at("threshold").is_null());

  const auto lo = cli({"thresholds", "--input", s1, "--level", "0.01", "--contour-level", "0.5", "--output", th});
  REQUIRE(lo.code == kExitOk);
  CHECK(slurp(th).rfind("level,area_pi,phi2_ps2\n", 0) == 0);
  CHECK(slurp(th + ".contour.csv").rfind("polyline,phi2_ps2,area_pi\n", 0) == 0);

  CHECK(cli({"thresholds", "--input", dir / "nope.csv"}).code == kExitConfig);
}

TEST_CASE("scan and ensemble commands") {
  TempDir dir;
  const auto s = dir / "scan.csv";
  REQUIRE(cli({"scan", "--detunings", "0,4", "--area-points", "21", "--output", s}).code == kExitOk);
  CHECK(slurp(s).rfind("area_pi,detuning_0meV,detuning_4meV\n", 0) == 0);
  CHECK(meta(s).at("results").at("curves")[0].at("first_maximum").at("area_pi") == 1.0);

  const auto t = dir / "two.csv";
  REQUIRE(cli({"scan", "--kind", "two-dot", "--area-points", "5", "--output", t}).code == kExitOk);
  CHECK(slurp(t).rfind("area_pi,A_phi2_0,A_phi2_0.3,B_phi2_0,B_phi2_0.3\n", 0) == 0);

  const auto e = dir / "ens.csv";
  REQUIRE(cli({"ensemble", "--output", e}).code == kExitOk);
  CHECK(rows(e).size() == 468);
  CHECK(meta(e).at("results").at("quantile_layout") == nlohmann::json::array({36, 13}));
  const auto e2 = dir / "ens2.csv";
  REQUIRE(cli({"ensemble", "--output", e2}).code == kExitOk);
  CHECK(slurp(e) == slurp(e2));
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"plot"}).code == kExitConfig);
  CHECK(cli({"evolve", "--bogus", "1"}).code == kExitConfig);
  CHECK(cli({"evolve", "--n-dots", "3"}).code == kExitConfig);
  CHECK(cli({"evolve", "--tau0", "-1"}).code == kExitConfig);
  CHECK(cli({"evolve", "--area", "5", "--dt", "0.02", "--output", dir / "x.csv"}).code == kExitIntegration);
  CHECK(cli({"evolve", "--output", dir / "no/such/dir/x.csv"}).code == kExitFailure);
}
