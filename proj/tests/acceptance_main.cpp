#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "blowuplab/acceptance.hpp"
#include "blowuplab/csv.hpp"
#include "blowuplab/manifest.hpp"

namespace fs = std::filesystem;
using namespace blowuplab;

namespace {

int shell(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Criterion 10: the check subcommand, plus round-trip and manifest properties of real CLI output.
acceptance::CriterionResult criterion10() {
  acceptance::CriterionResult r;
  r.id = 10;
  r.name = "check subcommand, CSV round-trip, manifest";
  std::ostringstream d;
  bool ok = true;
  auto note = [&](bool cond, const std::string& what) {
    ok = ok && cond;
    d << (d.tellp() > 0 ? "; " : "") << what << (cond ? "" : " [FAIL]");
  };
  const std::string cli = BLOWUPLAB_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / ("blowuplab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  const int rc = shell("'" + cli + "' check > '" + (dir / "check.log").string() + "' 2>&1");
  note(rc == 0, "check exit code " + std::to_string(rc));

  const fs::path sweep_dir = dir / "sweep";
  fs::create_directories(sweep_dir);
  const fs::path cfg = sweep_dir / "plan.cfg";
  std::ofstream(cfg) << "mu=2\nnu=0.4\np=1.5\nq=2\nN=1\nR=1\na=1\nb=0\neps=0.4,0.28,0.2\nladder=0.02,0.01\ncfl=0.45\nthreshold=1e8\n";
  const int src = shell("'" + cli + "' sweep --config '" + cfg.string() + "' --out '" + (sweep_dir / "sweep.csv").string() +
                        "' > /dev/null 2>&1");
  const int lrc = shell("'" + cli + "' linode figures --out-dir '" + (dir / "fig").string() + "' > /dev/null 2>&1");
  note(src == 0 && lrc == 0, "sweep and linode figures exit codes " + std::to_string(src) + "," + std::to_string(lrc));

  int files = 0, identical = 0;
  bool listed = true;
  const std::pair<fs::path, const char*> runs[] = {{sweep_dir, "sweep.manifest.json"}, {dir / "fig", "figures.manifest.json"}};
  for (const auto& [sub, manifest] : runs) {
    if (!fs::exists(sub / manifest)) {
      listed = false;
      continue;
    }
    const cli::RunManifest m = cli::read_manifest(sub / manifest);
    for (const auto& e : fs::directory_iterator(sub)) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const std::string bytes = slurp(e.path());
      const csv::Table t = csv::parse(bytes);
      const csv::Schema s{"", t.header};
      if (csv::render(s, t.rows) == bytes) ++identical;
      const std::string rel = e.path().filename().string();
      bool found = false;
      for (const auto& o : m.outputs) found = found || o == rel;
      listed = listed && found;
    }
    if (sub == sweep_dir) note(m.config_hash == cli::content_hash(slurp(cfg)), "config hash " + m.config_hash);
  }
  note(files > 0 && identical == files, std::to_string(identical) + "/" + std::to_string(files) + " CSVs re-render byte-identically");
  note(listed, "every CSV listed in its manifest");
  note(!fs::exists(sweep_dir / ".blowuplab.lock"), "lock released");
  fs::remove_all(dir);
  r.pass = ok;
  r.detail = d.str();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int failed = 0;
  for (int id : ids) {
    acceptance::CriterionResult r;
    if (id == 10) {
      const auto t0 = std::chrono::steady_clock::now();
      r = criterion10();
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      r = acceptance::run_criterion(id);
    }
    std::cout << acceptance::format_line(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
