#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "blowuplab/config.hpp"
#include "blowuplab/csv.hpp"
#include "blowuplab/manifest.hpp"

namespace fs = std::filesystem;
using namespace blowuplab;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("blowuplab_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the CLI, returning the exit code and capturing stdout.
int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string("'") + BLOWUPLAB_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int st = ::pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* kValid = "# sweep plan\nmu=2\nnu=0.4\np=1.5\nq=2\nN=1\nR=1\na=1\nb=0\neps=0.4,0.28,0.2\ndr=0.005\n";

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("Sobolev cap for N=3") {
    CHECK_NOTHROW(cli::parse_config_text("N=3\nq=5\nb=1\n"));
    CHECK_THROWS_AS(cli::parse_config_text("N=3\nq=7\nb=1\n"), cli::ConfigError);
  }

  TEST_CASE("p must exceed one") {
    try {
      cli::parse_config_text("p=1\n");
      FAIL("accepted p=1");
    } catch (const cli::ConfigError& e) {
      CHECK(std::string(e.what()).find("p") != std::string::npos);
    }
  }

  TEST_CASE("unknown key reports its line") {
    try {
      cli::parse_config_text("mu=2\n\n# note\ngamma=3\n", "plan.cfg");
      FAIL("accepted unknown key");
    } catch (const cli::ConfigError& e) {
      CHECK(e.line() == 4);
      CHECK(std::string(e.what()).find("plan.cfg:4") != std::string::npos);
    }
  }

  TEST_CASE("malformed value and duplicate key") {
    CHECK_THROWS_AS(cli::parse_config_text("mu=two\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config_text("mu=2\nmu=3\n"), cli::ConfigError);
  }

  TEST_CASE("valid file echoes a normalized set that re-parses to itself") {
    const cli::RunConfig c = cli::parse_config_text(kValid);
    CHECK(c.eps_list.size() == 3);
    CHECK(c.params.eps == doctest::Approx(0.4));
    const std::string norm = cli::normalized(c);
    for (const auto& k : cli::config_keys()) CHECK(norm.find(k + "=") != std::string::npos);
    CHECK(cli::normalized(cli::parse_config_text(norm)) == norm);
  }

  TEST_CASE("CSV round-trip is byte-identical") {
    TempDir d("csv");
    const auto& s = csv::schema("diagnose");
    const std::vector<csv::Row> rows{{"g1", "[1,20]", csv::num(1.71893456789012345), "true", "T0=0.5"},
                                     {"L", "[1,2.5]", csv::num(-3.5e-14), "false", "note, with \"quotes\""}};
    csv::emit(d.path / "r.csv", s, rows);
    const std::string bytes = slurp(d.path / "r.csv");
    CHECK(bytes.back() == '\n');
    const csv::Table t = csv::read(d.path / "r.csv", s);
    CHECK(t.rows == rows);
    CHECK(csv::render(s, t.rows) == bytes);
    CHECK(csv::num(0.1) == "0.1");
    CHECK(csv::num(1.0 / 3.0) == "0.333333333333");
  }

  TEST_CASE("empty rows give a header-only file") {
    TempDir d("empty");
    csv::emit(d.path / "e.csv", csv::schema("sweep"), {});
    CHECK(slurp(d.path / "e.csv") == "eps,T_est,converged,grid_dr\n");
  }

  TEST_CASE("column mismatch aborts before writing") {
    TempDir d("mismatch");
    CHECK_THROWS_AS(csv::emit(d.path / "bad.csv", csv::schema("amplitude"), {{"0", "1"}, {"1"}}), csv::SchemaError);
    CHECK_FALSE(fs::exists(d.path / "bad.csv"));
    CHECK_THROWS_AS(csv::schema("no_such_schema"), csv::SchemaError);
  }

  TEST_CASE("manifest round-trip") {
    TempDir d("manifest");
    cli::RunManifest m;
    m.command = "sweep";
    m.params = {{"mu", "2"}, {"eps", "0.4,0.2"}};
    m.tool_version = "0.1.0";
    m.started = cli::utc_now();
    m.finished = m.started;
    m.config_hash = cli::content_hash(kValid);
    m.outputs = {"sweep.csv", "sweep_summary.csv"};
    m.seed = 7;
    m.exit_code = 3;
    cli::write_manifest(d.path / "manifest.json", m);
    const cli::RunManifest r = cli::read_manifest(d.path / "manifest.json");
    CHECK(r.command == m.command);
    CHECK(r.params == m.params);
    CHECK(r.config_hash == m.config_hash);
    CHECK(r.outputs == m.outputs);
    CHECK(r.seed == 7);
    CHECK(r.exit_code == 3);
    CHECK(m.started.size() == 20);
    CHECK(cli::content_hash("") == "cbf29ce484222325");
    CHECK(cli::content_hash("a") == "af63dc4c8601ec8c");
  }

  TEST_CASE("directory lock is exclusive") {
    TempDir d("lock");
    {
      cli::DirectoryLock first(d.path);
      CHECK(fs::exists(first.path()));
      CHECK_THROWS_AS(cli::DirectoryLock(d.path), cli::LockError);
      std::string out;
      CHECK(run_cli("specfun --xi 0.5 --t 1 --out '" + (d.path / "k.csv").string() + "'", &out) == 2);
    }
    CHECK_NOTHROW(cli::DirectoryLock(d.path));
  }

  TEST_CASE("help lists every subcommand") {
    std::string out;
    CHECK(run_cli("--help", &out) == 0);
    for (const char* s : {"specfun", "exponents", "testfunc", "linode", "simulate", "diagnose", "sweep", "check"})
      CHECK_MESSAGE(out.find(s) != std::string::npos, s);
  }

  TEST_CASE("exit codes for configuration errors") {
    CHECK(run_cli("exponents --p 1") == 2);
    CHECK(run_cli("no-such-command") == 2);
    TempDir d("cfg");
    std::ofstream(d.path / "bad.cfg") << "mu=2\ngamma=1\n";
    CHECK(run_cli("sweep --config '" + (d.path / "bad.cfg").string() + "' --out '" + (d.path / "s.csv").string() + "'") == 2);
  }

  TEST_CASE("specfun prints 15 significant digits") {
    std::string out;
    REQUIRE(run_cli("specfun --xi 0.5 --t 1", &out) == 0);
    CHECK(out.find("K=0.461068504447895") != std::string::npos);
  }

  TEST_CASE("simulate and diagnose write listed, re-readable outputs") {
    TempDir d("sim");
    const std::string prefix = (d.path / "lin").string();
    std::string out;
    REQUIRE(run_cli("simulate --mu 2 --nu 0.4 --a 0 --b 0 --eps 0.1 --dr 0.02 --tmax 2 --snapshots 2 --out '" + prefix + "'",
                    &out) == 0);
    CHECK(out.find("status=SURVIVED") != std::string::npos);
    const cli::RunManifest m = cli::read_manifest(d.path / "lin.manifest.json");
    CHECK(m.command == "simulate");
    CHECK(m.params.at("mu") == "2");
    for (const char* f : {"lin_amp.csv", "lin_meta", "lin_snap_0000.csv"}) {
      CHECK(fs::exists(d.path / f));
      CHECK(std::find(m.outputs.begin(), m.outputs.end(), f) != m.outputs.end());
    }
    const std::string bytes = slurp(d.path / "lin_amp.csv");
    CHECK(csv::render(csv::schema("amplitude"), csv::read(d.path / "lin_amp.csv", csv::schema("amplitude")).rows) == bytes);

    REQUIRE(run_cli("diagnose --run '" + prefix + "' --checks transform --out '" + (d.path / "report.csv").string() + "'",
                    &out) == 0);
    const csv::Table rep = csv::read(d.path / "report.csv", csv::schema("diagnose"));
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0][0] == "transform");
    CHECK(rep.rows[0][3] == "true");
  }

  TEST_CASE("UNRESOLVED run exits with code 3") {
    TempDir d("unres");
    CHECK(run_cli("simulate --p 1.5 --eps 0.4 --dr 1e-10 --tmax 1 --out '" + (d.path / "u").string() + "'") == 3);
  }
}
