#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Exercises the installed command-line binary end to end. The path to the
// binary is passed through the GEOTRAJ_BIN environment variable.

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* p = std::getenv("GEOTRAJ_BIN");
  REQUIRE_MESSAGE(p != nullptr, "GEOTRAJ_BIN must point at the CLI binary");
  return p;
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() /
          ("geotraj_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const Workdir& w, const std::string& args) {
  const fs::path out = w.dir / "stdout.txt";
  const std::string cmd =
      binary() + " " + args + " > " + out.string() + " 2> " + w.path("stderr.txt");
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = status < 0 ? status : WEXITSTATUS(status);
  r.out = slurp(out);
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes schedule and trajectory files") {
  Workdir w;
  const auto r = run(w, "synth --gate H --out " + w.path("h"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("gamma_g = ") != std::string::npos);
  CHECK(r.out.find("total_area = ") != std::string::npos);
  CHECK(r.out.find("gate_time = ") != std::string::npos);
  CHECK(fs::exists(w.path("h_schedule.csv")));
  CHECK(fs::exists(w.path("h_trajectory.csv")));
  CHECK(slurp(w.path("h_schedule.csv")).rfind("t,omega,phi,delta", 0) == 0);
}

TEST_CASE("named gate and explicit parameters produce identical output") {
  Workdir w;
  const auto a = run(w, "synth --gate Xpi --chi1 0.3pi --chi3 0.7pi --out " + w.path("a"));
  const auto b = run(w, "synth --chi0 0.5pi --xi0 1pi --gamma 0.5pi "
                        "--chi1 0.3pi --chi3 0.7pi --out " + w.path("b"));
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(w.path("a_schedule.csv")) == slurp(w.path("b_schedule.csv")));
  CHECK(slurp(w.path("a_trajectory.csv")) == slurp(w.path("b_trajectory.csv")));
}

TEST_CASE("repeated runs are byte-identical") {
  Workdir w;
  run(w, "synth --gate Ypi2 --out " + w.path("r1"));
  run(w, "synth --gate Ypi2 --out " + w.path("r2"));
  CHECK(slurp(w.path("r1_schedule.csv")) == slurp(w.path("r2_schedule.csv")));
}

TEST_CASE("scan overlays the two constructions and reports dominance") {
  Workdir w;
  const auto r = run(w, "scan --gate Xpi --points 5 --out " + w.path("s"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("dominant = yes") != std::string::npos);
  const std::string csv = slurp(w.path("s_curves.csv"));
  CHECK(csv.rfind("delta,geometric,conventional", 0) == 0);
  CHECK(slurp(w.path("s_curves.svg")).find("<svg") != std::string::npos);
}

TEST_CASE("unknown gate name fails with the usage exit code") {
  Workdir w;
  CHECK(run(w, "synth --gate Qpi --out " + w.path("x")).exit_code == 2);
}

TEST_CASE("malformed angles fail with the usage exit code") {
  Workdir w;
  CHECK(run(w, "synth --gate H --chi1 bogus --out " + w.path("x")).exit_code == 2);
}

TEST_CASE("missing subcommand fails with the usage exit code") {
  Workdir w;
  CHECK(run(w, "").exit_code == 2);
}

TEST_CASE("report renders a line plot from a csv") {
  Workdir w;
  {
    std::ofstream csv(w.path("curve.csv"));
    csv << "delta,infidelity\n-0.1,0.01\n0,0\n0.1,0.012\n";
  }
  const auto r = run(w, "report --in " + w.path("curve.csv") + " --kind line --out " +
                            w.path("curve.svg"));
  CHECK(r.exit_code == 0);
  CHECK(slurp(w.path("curve.svg")).find("<svg") != std::string::npos);
}

TEST_CASE("config files with unknown keys are rejected") {
  Workdir w;
  {
    std::ofstream cfg(w.path("cfg.json"));
    cfg << "{\"transmon\": {\"t1_us\": 50.0, \"t1_usec\": 1.0}}\n";
  }
  CHECK(run(w, "--config " + w.path("cfg.json") + " synth --gate H --out " +
                   w.path("x")).exit_code == 2);
}

}  // TEST_SUITE
