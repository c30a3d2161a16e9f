#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string cli() {
  const char* path = std::getenv("LILAB_CLI");
  REQUIRE_MESSAGE(path != nullptr,
                  "LILAB_CLI must point at the built binary");
  return path;
}

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "lilab_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path scratch(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = cli() + " " + args;
  if (!stdout_to.empty()) {
    cmd += " > " + stdout_to.string() + " 2>&1";
  } else {
    cmd += " > /dev/null 2>&1";
  }
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kBrownianConfig = R"(# unit diffusion driven by its own noise
[system]
dim = 1
drift = zero
diffusion_1 = constant 1.0

[limit]
drift = zero
diffusion_1 = constant 1.0

[grid]
ratio = 2.0
windows = 6
delta = 0.01
)";

fs::path brownian_config(const std::string& dir, const std::string& extra) {
  const fs::path p = scratch(dir) / "config.ini";
  write_file(p, std::string(kBrownianConfig) + extra);
  return p;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("simulate --help") == 0);
}

TEST_CASE("simulate writes paths, flows, rescalings and a manifest") {
  const fs::path cfg = brownian_config("sim", R"(
[simulate]
u = 16 64
route = both
output_cells = 32
)");
  const fs::path out = scratch("sim/out");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + out.string() +
              " --seeds 2") == 0);

  for (const std::string seed : {"1", "2"}) {
    CHECK(fs::exists(out / ("path_seed" + seed + ".csv")));
    CHECK(fs::exists(out / ("flow_seed" + seed + ".csv")));
    CHECK(fs::exists(out / ("rescaled_seed" + seed + ".csv")));
    CHECK(fs::exists(out / ("rescaled_direct_seed" + seed + ".csv")));
  }

  const Json manifest = Json::parse(read_file(out / "manifest.json"));
  CHECK(manifest["tool"] == "lilab");
  CHECK(manifest["subcommand"] == "simulate");
  CHECK(manifest["seeds"] == Json::array({1, 2}));
  CHECK(manifest["config_fnv1a"].get<std::string>().size() == 16);
  CHECK(manifest["effective_config"]["grid"]["delta"] == "0.01");
  CHECK(manifest["outputs"].size() == 8);  // 4 files per seed

  // Header plus one row per node: windows 6 at delta 0.01 has 701 nodes.
  CHECK(count_lines(read_file(out / "path_seed1.csv")) == 702);
  // Two scales, 33 output rows each.
  CHECK(count_lines(read_file(out / "rescaled_seed1.csv")) == 1 + 2 * 33);
}

TEST_CASE("reruns are byte identical") {
  const fs::path cfg = brownian_config("repro", R"(
[simulate]
u = 16
route = both
output_cells = 16
)");
  const fs::path out1 = scratch("repro/a");
  const fs::path out2 = scratch("repro/b");
  const std::string tail = " --seeds 2 --set grid.windows=5";
  REQUIRE(run("simulate --config " + cfg.string() + " --out " +
              out1.string() + tail) == 0);
  REQUIRE(run("simulate --config " + cfg.string() + " --out " +
              out2.string() + tail) == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(out1)) {
    const auto name = entry.path().filename();
    CHECK(read_file(entry.path()) == read_file(out2 / name));
    ++compared;
  }
  CHECK(compared == 9);
}

TEST_CASE("distance query reports the line gap") {
  const fs::path cfg = brownian_config("dist", R"(
[dist]
target = line 2.0
cells = 64
)");
  const fs::path out = scratch("dist/out");
  REQUIRE(run("dist --config " + cfg.string() + " --out " + out.string()) ==
          0);
  const Json j = Json::parse(read_file(out / "dist.jsonl"));
  CHECK(j["distance"].get<double>() ==
        doctest::Approx(0.5857864376269049).epsilon(2e-4));
  CHECK(j["converged"].get<bool>());
  CHECK(j["control_energy"].get<double>() <= 1.0 + 1e-9);
  CHECK(fs::exists(out / "argmin.csv"));
  // 64 control cells: header plus one row per cell.
  CHECK(count_lines(read_file(out / "control.csv")) == 65);
}

TEST_CASE("rate picks the least squares route when it applies") {
  const fs::path cfg = brownian_config("rate", R"(
[rate]
target = line 1.4142135623730951
cells = 64
)");
  const fs::path out = scratch("rate/out");
  REQUIRE(run("rate --config " + cfg.string() + " --out " + out.string()) ==
          0);
  const Json j = Json::parse(read_file(out / "rate.jsonl"));
  CHECK(j["method"] == "exact");
  CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["converged"].get<bool>());
}

TEST_CASE("rate can be forced onto the variational route") {
  const fs::path cfg = brownian_config("ratevar", R"(
[rate]
target = line 1.4142135623730951
cells = 64
method = variational
)");
  const fs::path out = scratch("ratevar/out");
  REQUIRE(run("rate --config " + cfg.string() + " --out " + out.string()) ==
          0);
  const Json j = Json::parse(read_file(out / "rate.jsonl"));
  CHECK(j["method"] == "variational");
  CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("skeleton integrates a constant control") {
  const fs::path cfg = brownian_config("skel", R"(
[skeleton]
control = constant 1.0
cells = 32
)");
  const fs::path out = scratch("skel/out");
  REQUIRE(run("skeleton --config " + cfg.string() + " --out " +
              out.string()) == 0);
  const Json j = Json::parse(read_file(out / "skeleton.json"));
  CHECK(j["energy"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j["endpoint_norm"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs::exists(out / "skeleton.csv"));
  CHECK(fs::exists(out / "control.csv"));
}

TEST_CASE("field convergence verdicts") {
  const fs::path pass_cfg = scratch("checkh") / "pass.ini";
  write_file(pass_cfg, R"(
[system]
dim = 1
drift = zero
diffusion_1 = constant 0.5

[limit]
drift = zero
diffusion_1 = constant 0.5

[check_h]
box_lo = -1
box_hi = 1
points = 9
scales = 100 1000
tol = 1e-9
)");
  const fs::path out = scratch("checkh/pass");
  const fs::path log = scratch("checkh") / "pass.log";
  REQUIRE(run("check-h --config " + pass_cfg.string() + " --out " +
              out.string(), log) == 0);
  CHECK(read_file(log).find("PASS") != std::string::npos);
  const Json j = Json::parse(read_file(out / "summary.json"));
  CHECK(j["pass"].get<bool>());

  const fs::path fail_cfg = scratch("checkh") / "fail.ini";
  write_file(fail_cfg, R"(
[system]
dim = 1
drift = zero
diffusion_1 = tanh 1 1

[limit]
drift = zero
diffusion_1 = sign 1

[check_h]
box_lo = -1
box_hi = 1
points = 21
scales = 100 1000
tol = 0.05
)");
  const fs::path out2 = scratch("checkh/fail");
  const fs::path log2 = scratch("checkh") / "fail.log";
  REQUIRE(run("check-h --config " + fail_cfg.string() + " --out " +
              out2.string(), log2) == 0);  // the check ran; the verdict is data
  CHECK(read_file(log2).find("FAIL") != std::string::npos);
  const Json j2 = Json::parse(read_file(out2 / "summary.json"));
  CHECK(!j2["pass"].get<bool>());
  CHECK(read_file(out2 / "check_h.jsonl").find("\"sup_dev\":1.0") !=
        std::string::npos);
}

TEST_CASE("tail decay verdict and infinity serialization") {
  const fs::path cfg = scratch("checkc") / "config.ini";
  write_file(cfg, R"(
[system]
dim = 1
drift = zero
diffusion_1 = constant 1.0

[initial]
kind = point 3.0
bound = 2.5

[check_c]
delta = 1.0
scales = 10 100 1000
)");
  const fs::path out = scratch("checkc/out");
  const fs::path log = scratch("checkc") / "run.log";
  REQUIRE(run("check-c --config " + cfg.string() + " --out " + out.string(),
              log) == 0);
  CHECK(read_file(log).find("PASS") != std::string::npos);
  const std::string rows = read_file(out / "check_c.jsonl");
  CHECK(rows.find("\"-inf\"") != std::string::npos);
  const Json j = Json::parse(read_file(out / "summary.json"));
  CHECK(j["pass"].get<bool>());
  CHECK(j["delta"].get<double>() == 1.0);
}

TEST_CASE("lil emits one row per seed and window") {
  const fs::path cfg = brownian_config("lil", R"(
[lil]
mode = convergence
output_cells = 16
opt_cells = 16
opt_substeps = 1
opt_iters = 40
opt_starts = 0
)");
  const fs::path out = scratch("lil/out");
  REQUIRE(run("lil --config " + cfg.string() + " --out " + out.string() +
              " --seed-list 1,2") == 0);
  // Burn-in resolves to 5 at ratio 2: windows 5 and 6 remain.
  CHECK(count_lines(read_file(out / "lil.csv")) == 1 + 2 * 2);
  const Json j = Json::parse(read_file(out / "lil_summary.json"));
  CHECK(j["mode"] == "convergence");
  CHECK(j["burn_in"].get<int>() == 5);
  CHECK(j["per_window"].size() == 2);
  CHECK(count_lines(read_file(out / "lil_series.csv")) == 3);
}

TEST_CASE("seed selection priority") {
  const fs::path cfg = brownian_config("seeds", R"(
[run]
seeds = 11 12 13

[simulate]
write_path = true
write_flow = false
)");
  const fs::path out1 = scratch("seeds/config");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " +
              out1.string()) == 0);
  Json m = Json::parse(read_file(out1 / "manifest.json"));
  CHECK(m["seeds"] == Json::array({11, 12, 13}));

  const fs::path out2 = scratch("seeds/list");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " +
              out2.string() + " --seed-list 5,9") == 0);
  m = Json::parse(read_file(out2 / "manifest.json"));
  CHECK(m["seeds"] == Json::array({5, 9}));
  CHECK(fs::exists(out2 / "path_seed9.csv"));

  const fs::path out3 = scratch("seeds/count");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " +
              out3.string() + " --seeds 2") == 0);
  m = Json::parse(read_file(out3 / "manifest.json"));
  CHECK(m["seeds"] == Json::array({1, 2}));
}

TEST_CASE("config overrides land in the manifest") {
  const fs::path cfg = brownian_config("override", R"(
[simulate]
write_flow = false
)");
  const fs::path out = scratch("override/out");
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + out.string() +
              " --set grid.windows=4 --set grid.delta=0.02") == 0);
  const Json m = Json::parse(read_file(out / "manifest.json"));
  CHECK(m["overrides"] ==
        Json::array({"grid.windows=4", "grid.delta=0.02"}));
  CHECK(m["effective_config"]["grid"]["windows"] == "4");
  // 4 windows at delta 0.02: 50 + 4 * 50 cells, so 251 node rows.
  CHECK(count_lines(read_file(out / "path_seed1.csv")) == 252);
}

TEST_CASE("config mistakes exit with code 2") {
  const fs::path cfg = brownian_config("badkey", R"(
[grid]
zeta = 3
)");
  const fs::path out = scratch("badkey/out");
  CHECK(run("simulate --config " + cfg.string() + " --out " + out.string()) ==
        2);

  const fs::path missing = scratch("badkey") / "missing.ini";
  CHECK(run("simulate --config " + missing.string() + " --out " +
            out.string()) == 2);

  const fs::path badval = brownian_config("badval", R"(
[simulate]
route = sideways
)");
  CHECK(run("simulate --config " + badval.string() + " --out " +
            out.string()) == 2);
}

TEST_CASE("domain violations exit with code 3") {
  const fs::path cfg = brownian_config("domain", R"(
[simulate]
u = 2.0
)");
  const fs::path out = scratch("domain/out");
  CHECK(run("simulate --config " + cfg.string() + " --out " + out.string()) ==
        3);
}

TEST_CASE("numerical failures exit with code 4") {
  const fs::path cfg = scratch("numfail") / "config.ini";
  write_file(cfg, R"(
[system]
dim = 2
drift = zero
diffusion_1 = constant 1.0 0.0

[rate]
target = line 1.0 1.0
cells = 16
method = exact
)");
  const fs::path out = scratch("numfail/out");
  CHECK(run("rate --config " + cfg.string() + " --out " + out.string()) == 4);
}
