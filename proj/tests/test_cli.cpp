#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("KINWAVE_CLI");
  return p ? p : "";
}

int run(const std::string& args) {
  const std::string cmd =
      "\"" + cli_path() + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_tmp") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
};

}  // namespace

TEST_CASE("cli is reachable") { REQUIRE_FALSE(cli_path().empty()); }

TEST_CASE("rates from a key-value config and from JSON agree") {
  TempDir dir("rates");
  const auto kv = dir.path / "cfg.txt";
  std::ofstream(kv) << "chi_s = 0.48\nchi_n = 0\n";
  const auto js = dir.path / "cfg.json";
  std::ofstream(js) << "{\"chi_s\": 0.48, \"chi_n\": 0}\n";

  REQUIRE(run("rates --config " + kv.string() + " --out " +
              (dir.path / "a").string()) == 0);
  REQUIRE(run("rates --config " + js.string() + " --out " +
              (dir.path / "b").string()) == 0);

  const auto a = read_csv(dir.path / "a" / "rates.csv");
  REQUIRE(a.size() == 1);
  CHECK(a[0][0] == 1.48);
  CHECK(a[0][1] == 0.52);
  CHECK(a[0][2] == 0.52);
  CHECK(a[0][3] == 1.48);
  CHECK(slurp(dir.path / "a" / "rates.csv") ==
        slurp(dir.path / "b" / "rates.csv"));
}

TEST_CASE("critical speeds of the two-velocity analogue") {
  TempDir dir("crit");
  const auto cfg = dir.path / "cfg.txt";
  std::ofstream(cfg) << "velocities = [-1, 1]\nchi_s = 0.48\nchi_n = 0.44\n";
  REQUIRE(run("critical-speeds --config " + cfg.string() + " --out " +
              dir.path.string()) == 0);
  const auto rows = read_csv(dir.path / "critical_speeds.csv");
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0][0] - (-0.04)) < 1e-12);
  CHECK(std::abs(rows[0][1] - 0.92) < 1e-12);
}

TEST_CASE("mode listing at a fixed speed") {
  TempDir dir("modes");
  REQUIRE(run("modes --preset fig8 --c 0.2 --out " + dir.path.string()) == 0);
  const auto rows = read_csv(dir.path / "modes.csv");
  REQUIRE(rows.size() == 4);  // 2 left + 2 right
  int left = 0, right = 0;
  for (const auto& r : rows) (r[0] < 0 ? left : right)++;
  CHECK(left == 2);
  CHECK(right == 2);
  for (const auto& r : rows) CHECK(r[1] > 0.0);  // exponents positive
}

TEST_CASE("scan output is byte-identical across runs and thread counts") {
  TempDir dir("det");
  const auto cfg = dir.path / "cfg.txt";
  std::ofstream(cfg)
      << "velocities = [-1, -0.5, 0.5, 1]\nchi_s = 0.48\nchi_n = 0.44\n"
      << "alpha = 50\nd_s = 0.5\ndc = 0.05\n";
  REQUIRE(run("scan --config " + cfg.string() + " --threads 1 --out " +
              (dir.path / "a").string()) == 0);
  REQUIRE(run("scan --config " + cfg.string() + " --threads 2 --out " +
              (dir.path / "b").string()) == 0);
  CHECK(slurp(dir.path / "a" / "scan.csv") ==
        slurp(dir.path / "b" / "scan.csv"));
  CHECK(slurp(dir.path / "a" / "jumps.csv") ==
        slurp(dir.path / "b" / "jumps.csv"));
}

TEST_CASE("preset waves and clusters succeed") {
  TempDir dir("preset");
  CHECK(run("wave --preset fig8 --out " + (dir.path / "w").string()) == 0);
  CHECK(run("cluster --preset fig3 --out " + (dir.path / "c").string()) == 0);
  CHECK(fs::exists(dir.path / "w" / "waves.json"));
  CHECK(fs::exists(dir.path / "c" / "cluster_profile.csv"));
}

TEST_CASE("wave exits 3 when no ansatz-valid wave exists") {
  TempDir dir("nowave");
  const auto cfg = dir.path / "cfg.txt";
  // two velocities, no nutrient bias: upsilon < 0 on the whole window
  std::ofstream(cfg) << "velocities = [-1, 1]\nchi_s = 0.3\nchi_n = 0\n"
                     << "alpha = 1\nd_s = 1\n";
  CHECK(run("wave --config " + cfg.string() + " --out " + dir.path.string()) ==
        3);
}

TEST_CASE("cluster writes a symmetric profile") {
  TempDir dir("cluster");
  const auto cfg = dir.path / "cfg.txt";
  std::ofstream(cfg) << "velocities = [-1, -0.5, 0.5, 1]\nchi_s = 0.48\n"
                     << "chi_n = 0\nalpha = 50\nd_s = 0.5\n";
  REQUIRE(run("cluster --config " + cfg.string() + " --out " +
              dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "cluster_profile.csv"));
  CHECK(fs::exists(dir.path / "cluster.json"));
}

TEST_CASE("error exit codes") {
  TempDir dir("err");
  CHECK(run("reproduce --preset nosuchfigure --out " + dir.path.string()) ==
        2);
  CHECK(run("modes --preset fig8 --out " + dir.path.string()) == 2);  // no --c
  // c collides with a velocity: numerical failure
  CHECK(run("modes --preset fig8 --c 0.5 --out " + dir.path.string()) == 4);
  // cluster demands a symmetric measure
  const auto cfg = dir.path / "asym.txt";
  std::ofstream(cfg) << "velocities = [-1, 0.2, 1]\nchi_s = 0.3\nchi_n = 0\n";
  CHECK(run("cluster --config " + cfg.string() + " --out " +
            dir.path.string()) == 2);
}

TEST_CASE("macro subcommand emits the diffusion-limit speed") {
  TempDir dir("macro");
  const auto cfg = dir.path / "cfg.txt";
  std::ofstream(cfg) << "chi_s = 0.48\nchi_n = 0.44\nalpha = 50\nd_s = 0.5\n";
  REQUIRE(run("macro --config " + cfg.string() + " --out " +
              dir.path.string()) == 0);
  const auto text = slurp(dir.path / "macro.json");
  CHECK(text.find("0.4198") != std::string::npos);
}
