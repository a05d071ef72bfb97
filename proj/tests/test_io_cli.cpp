#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "common.hpp"
#include "cssr/cli.hpp"
#include "cssr/config.hpp"
#include "cssr/errors.hpp"
#include "cssr/snapshot.hpp"
#include "oracles.hpp"

using namespace cssr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "cssr_io_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kSmallGrid = {"--n-x", "64", "--l-x", "8", "--m-y", "16"};

std::vector<std::string> with_grid(std::vector<std::string> args) {
  args.insert(args.end(), kSmallGrid.begin(), kSmallGrid.end());
  return args;
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("config parsing") {
  SUBCASE("empty text gives valid defaults") {
    const ParsedConfig p = parse_config_text("");
    CHECK(p.warnings.empty());
    CHECK(p.config.grid.n_x == 256);
    CHECK(p.config.grid.l_x == 12.0);
    CHECK(p.config.grid.m_y == 64);
    CHECK(p.config.dt == 2.5e-4);
    CHECK(p.config.snapshot_stride == 0.01);
    CHECK_NOTHROW(p.config.validate());
  }
  SUBCASE("values, comments and lists") {
    const ParsedConfig p = parse_config_text(
        "# study\n"
        "physics.beta = 2   # trailing comment\n"
        "sweep.epsilons = [0.4, 0.2, 0.1]\n"
        "flow.seed_profile = noisy-gaussian\n"
        "output.write_fields = true\n"
        "output.dir = \"runs/a\"\n");
    CHECK(p.config.beta == 2.0);
    CHECK(p.config.epsilons == std::vector<double>{0.4, 0.2, 0.1});
    CHECK(p.config.flow.seed_profile == SeedProfile::noisy_gaussian);
    CHECK(p.config.write_fields);
    CHECK(p.config.output_dir == "runs/a");
  }
  SUBCASE("unknown keys warn") {
    const ParsedConfig p = parse_config_text("physics.gamma = 3\n");
    REQUIRE(p.warnings.size() == 1);
    CHECK(p.warnings[0].find("physics.gamma") != std::string::npos);
  }
  SUBCASE("errors name the key") {
    auto message = [](const std::string& text) {
      try {
        parse_config_text(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("physics.epsilon = -1\n").find("physics.epsilon") == 0);
    CHECK(message("grid.n_x = 100\n").find("grid.n_x") == 0);
    CHECK(message("time.dt = fast\n").find("time.dt") == 0);
    CHECK(message("sweep.epsilons = [0.1, 0.2]\n").find("sweep.epsilons") == 0);
    CHECK(message("flow.seed_profile = flat\n").find("flow.seed_profile") == 0);
    CHECK(message("output.write_fields = maybe\n").find("output.write_fields") == 0);
    CHECK_FALSE(message("just words\n").empty());
  }
  SUBCASE("files") {
    const fs::path dir = scratch("config");
    std::ofstream(dir / "c.cfg") << "physics.epsilon = 0.125\n";
    CHECK(parse_config((dir / "c.cfg").string()).config.epsilon == 0.125);
    CHECK_THROWS_AS(parse_config((dir / "missing.cfg").string()), ConfigError);
  }
  SUBCASE("every key round-trips through the JSON echo") {
    const nlohmann::json j = SimulationConfig{}.to_json();
    for (const auto& k : config_keys()) CHECK(j.contains(k));
  }
}

TEST_CASE("snapshot round trip and rejection") {
  const auto& ws = testing_ws::small();
  const fs::path dir = scratch("snap");
  std::mt19937_64 rng(77);
  const Field2D f = oracle::random_field(ws, rng, 5);
  SnapshotMeta meta;
  meta.n_x = static_cast<std::uint32_t>(ws.n_x());
  meta.m_y = static_cast<std::uint32_t>(ws.m_y());
  meta.l_x = 10.0;
  meta.time = 0.3;
  meta.epsilon = 0.05;
  meta.beta = 1.0;
  const std::string path = (dir / "f.snap").string();
  write_snapshot(path, f, meta);
  CHECK(fs::file_size(path) == 48 + 16 * f.size());

  const Snapshot s = read_snapshot(path);
  CHECK(std::memcmp(s.field.data(), f.data(), sizeof(cplx) * f.size()) == 0);
  CHECK(s.meta.n_x == meta.n_x);
  CHECK(s.meta.m_y == meta.m_y);
  CHECK(s.meta.time == meta.time);
  CHECK(s.meta.epsilon == meta.epsilon);
  CHECK(s.meta.beta == meta.beta);
  CHECK(s.meta.l_x == meta.l_x);

  const std::string bytes = slurp(path);
  auto write_bytes = [&](const std::string& name, const std::string& b) {
    std::ofstream((dir / name).string(), std::ios::binary) << b;
    return (dir / name).string();
  };
  CHECK_THROWS_AS(read_snapshot(write_bytes("short.snap", bytes.substr(0, bytes.size() - 8))), SnapshotError);
  CHECK_THROWS_AS(read_snapshot(write_bytes("header.snap", bytes.substr(0, 20))), SnapshotError);
  std::string v2 = bytes;
  v2[4] = 2;
  try {
    read_snapshot(write_bytes("v2.snap", v2));
    FAIL("version 2 accepted");
  } catch (const SnapshotError& e) {
    CHECK(std::string(e.what()).find("unsupported version") != std::string::npos);
  }
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(read_snapshot(write_bytes("magic.snap", magic)), SnapshotError);
  CHECK_THROWS_AS(read_snapshot((dir / "none.snap").string()), SnapshotError);
  SnapshotMeta wrong = meta;
  wrong.m_y = 3;
  CHECK_THROWS_AS(write_snapshot((dir / "w.snap").string(), f, wrong), SnapshotError);
}

TEST_CASE("cli: ground1d at beta 0 reports the oscillator energy") {
  const fs::path dir = scratch("g1");
  const CliRun r = cli({"ground1d", "--beta", "0", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "ground1d");
  CHECK(std::abs(j["results"]["energy"]["total"].get<double>() - 1.0) <= 1e-6);
  CHECK(j["config"]["physics.beta"] == 0.0);
  CHECK(j.contains("wall_time"));
  CHECK(fs::exists(dir / "ground1d.json"));
}

TEST_CASE("cli: sweep-gse schema and determinism") {
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  std::ofstream(a / "c.cfg") << "sweep.epsilons = [0.4, 0.2, 0.1]\nphysics.beta = 1\n";
  const auto args = [&](const fs::path& out) {
    return with_grid({"sweep-gse", "--config", (a / "c.cfg").string(), "--out", out.string()});
  };
  REQUIRE(cli(args(a)).code == kExitOk);
  REQUIRE(cli(args(b)).code == kExitOk);
  const std::string csv = slurp(a / "sweep_gse.csv");
  CHECK(csv.rfind("epsilon,e_eps,E2D,gap,iterations,converged\n", 0) == 0);
  CHECK(csv.find("\n# {") != std::string::npos);
  CHECK(csv == slurp(b / "sweep_gse.csv"));
}

TEST_CASE("cli: sweep-dyn schema") {
  const fs::path dir = scratch("sweep_dyn");
  const CliRun r = cli(with_grid({"sweep-dyn", "--t-final", "0.05", "--dt", "0.005", "--set",
                                  "sweep.epsilons=[0.4,0.2,0.1]", "--out", dir.string()}));
  CHECK(r.code == kExitOk);
  const std::string csv = slurp(dir / "sweep_dyn.csv");
  CHECK(csv.rfind("epsilon,t_final,dt,dyn_residual,proj_residual\n", 0) == 0);
  CHECK(csv.find("proj_rate") != std::string::npos);
}

TEST_CASE("cli: evolve writes a trajectory table and snapshots") {
  const fs::path dir = scratch("evolve");
  const CliRun r = cli(with_grid({"evolve2d", "--t-final", "0.02", "--dt", "0.005", "--set",
                                  "output.write_fields=true", "--set", "time.snapshot_stride=0.01",
                                  "--out", dir.string()}));
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir / "evolve2d.csv").rfind("time,mass,energy,continuity_residual\n", 0) == 0);
  const Snapshot s = read_snapshot((dir / "evolve2d_00002.snap").string());
  CHECK(s.meta.time == doctest::Approx(0.02));
  CHECK(s.field.cols() == 16);
}

TEST_CASE("cli: exit codes and the output override") {
  CHECK(cli({"bogus"}).code == kExitValidation);
  CHECK(cli({}).code == kExitValidation);
  const CliRun bad = cli({"ground2d", "--epsilon", "-1"});
  CHECK(bad.code == kExitValidation);
  CHECK(bad.err.find("physics.epsilon") != std::string::npos);

  const fs::path dir = scratch("codes");
  CHECK(cli(with_grid({"ground1d", "--set", "flow.max_iters=2", "--out", dir.string()})).code ==
        kExitNotConverged);
  CHECK(cli(with_grid({"evolve2d", "--beta", "5", "--dt", "0.05", "--t-final", "1", "--out", dir.string()}))
            .code == kExitUnstable);
  const CliRun warn = cli(with_grid({"ground1d", "--beta", "0", "--set", "foo.bar=1", "--out", dir.string()}));
  CHECK(warn.code == kExitOk);
  CHECK(warn.err.find("foo.bar") != std::string::npos);

  const fs::path env_dir = scratch("env");
  ::setenv("CSSR_OUTPUT_DIR", env_dir.string().c_str(), 1);
  const CliRun r = cli(with_grid({"ground1d", "--beta", "0"}));
  ::unsetenv("CSSR_OUTPUT_DIR");
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(env_dir / "ground1d.json"));
}

TEST_CASE("cli: verify passes on the default grid") {
  const fs::path dir = scratch("verify");
  const CliRun r = cli({"verify", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

}  // TEST_SUITE
