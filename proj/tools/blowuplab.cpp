#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "blowuplab/acceptance.hpp"
#include "blowuplab/config.hpp"
#include "blowuplab/csv.hpp"
#include "blowuplab/diagnostics.hpp"
#include "blowuplab/exponents.hpp"
#include "blowuplab/lifespan.hpp"
#include "blowuplab/linode.hpp"
#include "blowuplab/manifest.hpp"
#include "blowuplab/specfun.hpp"
#include "blowuplab/testfunc.hpp"
#include "blowuplab/wavesolver.hpp"

namespace fs = std::filesystem;
using namespace blowuplab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Lock, output list and manifest for one output directory.
class OutputSession {
 public:
  // The manifest is <stem>.manifest.json next to the outputs, so commands sharing a directory keep theirs.
  OutputSession(std::string command, const fs::path& dir, const std::string& stem, unsigned long long seed)
      : dir_(dir.empty() ? fs::path(".") : dir), stem_(stem) {
    fs::create_directories(dir_);
    lock_.emplace(dir_);
    m_.command = std::move(command);
    m_.tool_version = BLOWUPLAB_VERSION;
    m_.started = cli::utc_now();
    m_.seed = seed;
  }
  void set_config(const cli::RunConfig& cfg, bool from_file) {
    std::istringstream in(cli::normalized(cfg));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) m_.params[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (from_file) m_.config_hash = cli::content_hash(cfg.raw);
  }
  void param(const std::string& k, const std::string& v) { m_.params[k] = v; }
  void emit(const fs::path& path, const csv::Schema& s, const std::vector<csv::Row>& rows) {
    csv::emit(path, s, rows);
    record(path);
  }
  void record(const fs::path& path) { m_.outputs.push_back(path.lexically_relative(dir_).generic_string()); }
  int finish(int code) {
    m_.finished = cli::utc_now();
    m_.exit_code = code;
    cli::write_manifest(dir_ / (stem_ + ".manifest.json"), m_);
    return code;
  }

 private:
  fs::path dir_;
  std::string stem_;
  std::optional<cli::DirectoryLock> lock_;
  cli::RunManifest m_;
};

fs::path parent_of(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }
std::string stem_of(const fs::path& p) { return p.stem().string(); }

// Model flags shared by exponents, simulate and sweep; explicit flags override the config file.
struct ModelFlags {
  std::string config;
  std::optional<double> mu, nu, p, q, R, dr, cfl, tmax, threshold;
  std::optional<int> N, a, b;
  std::optional<std::string> eps;

  void add(CLI::App* s, bool numerics) {
    s->add_option("--config", config, "key=value parameter file")->check(CLI::ExistingFile);
    s->add_option("--mu", mu, "damping coefficient");
    s->add_option("--nu", nu, "mass coefficient");
    s->add_option("--p", p, "power of |u_t|");
    s->add_option("--q", q, "power of |u|");
    s->add_option("--N", N, "space dimension");
    s->add_option("--R", R, "data support radius");
    s->add_option("--a", a, "derivative nonlinearity switch");
    s->add_option("--b", b, "power nonlinearity switch");
    s->add_option("--eps", eps, "data amplitude (comma list for sweeps)");
    if (numerics) {
      s->add_option("--dr", dr, "grid spacing");
      s->add_option("--cfl", cfl, "dt/dr");
      s->add_option("--tmax", tmax, "final time");
      s->add_option("--threshold", threshold, "blow-up amplitude");
    }
  }

  // Flags are appended to the file text (minus the keys they override) and parsed by the config grammar.
  cli::RunConfig resolve() const {
    cli::RunConfig cfg = config.empty() ? cli::RunConfig{} : cli::parse_config(config);
    std::ostringstream flags;
    flags.precision(17);
    std::set<std::string> overridden;
    auto put = [&](const char* k, const auto& v) {
      if (!v) return;
      flags << k << '=' << *v << '\n';
      overridden.insert(k);
    };
    put("mu", mu);
    put("nu", nu);
    put("p", p);
    put("q", q);
    put("N", N);
    put("R", R);
    put("a", a);
    put("b", b);
    put("eps", eps);
    put("dr", dr);
    put("cfl", cfl);
    put("tmax", tmax);
    put("threshold", threshold);
    if (overridden.empty()) return cfg;
    std::istringstream in(cfg.raw);
    std::string line, merged;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      std::string key = eq == std::string::npos ? "" : line.substr(0, eq);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      if (!overridden.count(key)) merged += line + '\n';
    }
    cli::RunConfig out = cli::parse_config_text(merged + flags.str(), config.empty() ? "<flags>" : config);
    out.raw = cfg.raw;
    return out;
  }
};

csv::Row exponent_row(const exponents::ExponentReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? csv::num(*v) : std::string(); };
  std::string life;
  switch (r.lifespan.kind) {
    case exponents::LifespanExponent::Kind::power: life = csv::num(r.lifespan.value); break;
    case exponents::LifespanExponent::Kind::exponential: life = "exp:" + csv::num(r.lifespan.value); break;
    case exponents::LifespanExponent::Kind::none: break;
  }
  return {csv::num(r.delta),           opt(r.alpha),          opt(r.sigma),
          csv::num(r.p_glassey_shifted), csv::num(r.q_strauss_shifted), csv::num(r.q_fujita),
          csv::num(r.lambda_shifted),  exponents::to_string(r.region), life};
}

std::vector<double> parse_grid(const std::string& spec) {
  // lo:hi:count
  double lo = 0, hi = 0;
  long n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 || !(hi > lo))
    throw cli::ConfigError("--grid", 0, "expected lo:hi:count with hi > lo and count >= 2, got '" + spec + "'");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return g;
}

std::string meta_text(const cli::RunConfig& cfg, const wave::SimOutcome& o, int snapshots) {
  std::ostringstream os;
  os << cli::normalized(cfg);
  os.precision(12);
  os << "snapshots=" << snapshots << "\ngeometry="
     << wave::to_string(o.config.geometry) << "\nstatus=" << wave::to_string(o.status) << "\nT_est=" << o.T_est
     << "\nbracket_lo=" << o.bracket_lo << "\nbracket_hi=" << o.bracket_hi << "\nt_end=" << o.t_end
     << "\ndt=" << o.dt << "\nsteps=" << o.steps << '\n';
  return os.str();
}

// Keys of a simulate meta file that are not configuration keys.
bool is_outcome_key(const std::string& k) {
  static const char* keys[] = {"snapshots", "geometry", "status", "T_est", "bracket_lo",
                               "bracket_hi", "t_end",    "dt",     "steps"};
  for (const char* s : keys)
    if (k == s) return true;
  return false;
}

wave::SolverConfig solver_config(const cli::RunConfig& cfg) {
  wave::SolverConfig c;
  c.dr = cfg.dr;
  c.cfl = cfg.cfl;
  c.t_max = cfg.t_max;
  c.threshold = cfg.threshold;
  c.snapshot_every = cfg.snapshot_every;
  return c;
}

// ---- subcommands -------------------------------------------------------------

int cmd_specfun(double xi, double t, const std::string& out, unsigned long long seed) {
  const specfun::BesselEval e = specfun::bessel_k_eval(xi, t);
  const bool under = e.status == specfun::EvalStatus::underflow;
  std::cout << "K=" << g15(e.value) << "\nlog_K=" << g15(e.log_value) << "\ndK_dt=" << g15(specfun::bessel_k_dt(xi, t))
            << "\nabs_error=" << g15(e.abs_error_estimate) << "\nstatus=" << (under ? "UNDERFLOW" : "OK") << '\n';
  if (out.empty()) return 0;
  OutputSession s("specfun", parent_of(out), stem_of(out), seed);
  s.param("xi", csv::num(xi));
  s.param("t", csv::num(t));
  s.emit(out, csv::schema("specfun"),
         {{csv::num(xi), csv::num(t), csv::num(e.value), csv::num(e.log_value), csv::num(specfun::bessel_k_dt(xi, t)),
           under ? "UNDERFLOW" : "OK"}});
  return s.finish(0);
}

int cmd_exponents(const ModelFlags& f, const std::string& out, unsigned long long seed) {
  const cli::RunConfig cfg = f.resolve();
  const exponents::ExponentReport r = exponents::classify(cfg.params);
  const auto& sch = csv::schema("exponents");
  if (out.empty()) {
    std::cout << csv::render(sch, {exponent_row(r)});
    if (!r.note.empty()) std::cerr << r.note << '\n';
    return 0;
  }
  OutputSession s("exponents", parent_of(out), stem_of(out), seed);
  s.set_config(cfg, !f.config.empty());
  s.emit(out, sch, {exponent_row(r)});
  return s.finish(0);
}

int cmd_testfunc_check() {
  int code = 0;
  for (int id : {2, 3}) {
    const auto r = acceptance::run_criterion(id);
    std::cout << acceptance::format_line(r) << '\n';
    if (!r.pass) code = kExitAcceptance;
  }
  return code;
}

int cmd_testfunc_dump(const std::string& what, const std::string& grid, double mu, double nu, int N,
                      const std::string& out, unsigned long long seed) {
  ModelParams p;
  p.mu = mu;
  p.nu = nu;
  p.N = N;
  const std::vector<double> xs = parse_grid(grid);
  std::vector<csv::Row> rows;
  const bool radial = what == "phi";
  std::optional<testfunc::TestFunctionKit> kit;
  if (!radial) kit.emplace(p);
  for (double x : xs) {
    double v = 0.0;
    if (what == "phi") v = testfunc::phi(x, N);
    else if (what == "rho") v = kit->rho(x);
    else v = kit->Gamma(x);
    rows.push_back({csv::num(x), csv::num(v)});
  }
  const auto& sch = csv::schema(radial ? "series_r" : "series_t");
  if (out.empty()) {
    std::cout << csv::render(sch, rows);
    return 0;
  }
  OutputSession s("testfunc dump", parent_of(out), stem_of(out), seed);
  s.param("what", what);
  s.param("grid", grid);
  s.param("mu", csv::num(mu));
  s.param("nu", csv::num(nu));
  s.param("N", csv::num(static_cast<long long>(N)));
  s.emit(out, sch, rows);
  return s.finish(0);
}

std::vector<csv::Row> trace_rows(const linode::OdeTrace& tr) {
  std::vector<csv::Row> rows;
  rows.reserve(tr.t.size());
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    rows.push_back({csv::num(tr.t[i]), csv::num(tr.F1[i]), csv::num(tr.F1_prime[i]), csv::num(tr.F2[i])});
  return rows;
}

int cmd_linode(double mu, double nu, const std::vector<double>& ic, double tmax, double rtol, const std::string& out,
               unsigned long long seed) {
  if (ic.size() != 2) throw cli::ConfigError("--ic", 0, "expected two values a,b");
  const linode::OdeTrace tr = linode::solve_appendix_ode(mu, nu, {ic[0], ic[1]}, tmax, rtol);
  const auto sc = linode::sign_changes(tr);
  std::cout << "sign_changes=" << sc.count << "\nfinal_sign=" << linode::final_quarter_sign(tr) << '\n';
  OutputSession s("linode", parent_of(out), stem_of(out), seed);
  s.param("mu", csv::num(mu));
  s.param("nu", csv::num(nu));
  s.param("ic", csv::num(ic[0]) + "," + csv::num(ic[1]));
  s.param("tmax", csv::num(tmax));
  s.param("rtol", csv::num(rtol));
  s.emit(out, csv::schema("linode_trace"), trace_rows(tr));
  return s.finish(0);
}

int cmd_linode_figures(const std::string& out_dir, unsigned long long seed) {
  const auto figs = linode::run_figures();
  OutputSession s("linode figures", out_dir, "figures", seed);
  std::vector<csv::Row> summary;
  for (const auto& f : figs) {
    s.emit(fs::path(out_dir) / ("trace_fig" + std::to_string(f.fig.index) + ".csv"), csv::schema("linode_trace"),
           trace_rows(f.trace));
    summary.push_back({csv::num(f.fig.mu), csv::num(f.fig.nu), csv::num(f.delta),
                       csv::num(static_cast<long long>(f.sign_changes)), csv::num(static_cast<long long>(f.final_sign))});
  }
  s.emit(fs::path(out_dir) / "summary.csv", csv::schema("linode_summary"), summary);
  std::cout << csv::render(csv::schema("linode_summary"), summary);
  return s.finish(0);
}

int cmd_simulate(const ModelFlags& f, int snapshots, const std::string& prefix, unsigned long long seed) {
  cli::RunConfig cfg = f.resolve();
  if (snapshots < 0) throw cli::ConfigError("--snapshots", 0, "must be >= 0");
  if (snapshots > 0) cfg.snapshot_every = cfg.t_max / snapshots;
  const wave::SimOutcome o = wave::run(cfg.params, solver_config(cfg));

  OutputSession s("simulate", parent_of(prefix), stem_of(prefix), seed);
  s.set_config(cfg, !f.config.empty());
  std::vector<csv::Row> amp;
  amp.reserve(o.history_t.size());
  for (std::size_t i = 0; i < o.history_t.size(); ++i)
    amp.push_back({csv::num(o.history_t[i]), csv::num(o.history_amp[i])});
  s.emit(prefix + "_amp.csv", csv::schema("amplitude"), amp);
  {
    std::ofstream meta(prefix + "_meta");
    meta << meta_text(cfg, o, snapshots);
    s.record(prefix + "_meta");
  }
  for (std::size_t k = 0; k < o.snapshots.size(); ++k) {
    const wave::Snapshot& sn = o.snapshots[k];
    std::vector<csv::Row> rows;
    for (std::size_t j = 0; j < sn.u.size(); ++j)
      rows.push_back({csv::num(o.grid.coord(sn.first + j)), csv::num(sn.u[j]), csv::num(sn.ut(j))});
    char name[32];
    std::snprintf(name, sizeof name, "_snap_%04zu.csv", k);
    s.emit(prefix + name, csv::schema("snapshot"), rows);
  }
  std::cout << "status=" << wave::to_string(o.status) << "\nT_est=" << g15(o.T_est) << "\nt_end=" << g15(o.t_end)
            << '\n';
  return s.finish(o.status == wave::Status::unresolved ? kExitNumerical : 0);
}

// Re-creates the run described by a simulate meta file, with a snapshot cadence suited to the diagnostics.
struct ReplayedRun {
  cli::RunConfig cfg;
  wave::SimOutcome outcome;
};

ReplayedRun replay(const std::string& prefix, double every, double dr_scale = 1.0) {
  std::ifstream in(prefix + "_meta");
  if (!in) throw cli::ConfigError(prefix + "_meta", 0, "cannot open run metadata");
  std::string line, cfg_text;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || is_outcome_key(line.substr(0, eq))) continue;
    cfg_text += line + '\n';
  }
  ReplayedRun r;
  r.cfg = cli::parse_config_text(cfg_text, prefix + "_meta");
  r.cfg.dr *= dr_scale;
  r.cfg.snapshot_every = every;
  r.outcome = wave::run(r.cfg.params, solver_config(r.cfg));
  return r;
}

std::string window(double lo, double hi) { return "[" + csv::num(lo) + "," + csv::num(hi) + "]"; }

int cmd_diagnose(const std::string& prefix, const std::vector<std::string>& checks, double every, const std::string& out,
                 unsigned long long seed) {
  const ReplayedRun run = replay(prefix, every);
  const wave::SimOutcome& o = run.outcome;
  const ModelParams& p = run.cfg.params;
  if (o.status == wave::Status::unresolved) throw NumericalFailure("run is UNRESOLVED; nothing to diagnose");
  const bool linear = p.a == 0 && p.b == 0;
  const double t_hi = o.status == wave::Status::blew_up ? o.T_est : o.t_end;
  const double t_weak = o.status == wave::Status::blew_up ? 0.9 * o.T_est : o.t_end;

  std::optional<testfunc::TestFunctionKit> kit;
  std::optional<diag::FunctionalTrace> trace;
  std::optional<diag::G2Check> g2;
  auto need_trace = [&]() -> const diag::FunctionalTrace& {
    if (!trace) {
      kit.emplace(p);
      trace = diag::compute_functionals(o, *kit);
    }
    return *trace;
  };
  auto need_g2 = [&]() -> const diag::G2Check& {
    if (!g2) g2 = diag::check_G2(need_trace(), p, p.eps);
    return *g2;
  };
  std::optional<ReplayedRun> fine;
  auto need_fine = [&]() -> const wave::SimOutcome& {
    if (!fine) fine = replay(prefix, every, 0.5);
    return fine->outcome;
  };

  std::vector<csv::Row> rows;
  bool all_pass = true;
  auto row = [&](const std::string& check, const std::string& win, double c, std::optional<bool> pass,
                 const std::string& detail) {
    if (pass && !*pass) all_pass = false;
    rows.push_back({check, win, csv::num(c), pass ? (*pass ? "true" : "false") : "skipped", detail});
  };

  for (const std::string& c : checks) {
    if (c == "g1") {
      const double hi = 0.5 * t_hi;
      if (hi <= 1.0) {
        row("g1", window(1.0, hi), NAN, std::nullopt, "window empty");
        continue;
      }
      const diag::G1Fit fit = diag::fit_G1(need_trace(), p.eps, 1.0, hi);
      row("g1", window(1.0, hi), fit.c_fit, fit.c_fit > 0, "T0=" + csv::num(fit.T0));
    } else if (c == "g2") {
      const diag::G2Check& g = need_g2();
      row("g2", window(0.0, need_trace().t.back()), g.c_G2, g.pass,
          "K_fit=" + csv::num(g.K_fit) + " coercive_from=" + (g.coercive_from ? csv::num(*g.coercive_from) : "none") +
              " min_G2=" + csv::num(g.min_G2));
    } else if (c == "L") {
      const diag::InequalityCheck L = diag::check_L_inequality(need_trace(), p, o.status == wave::Status::blew_up ? o.T_est : NAN);
      row("L", window(L.t_lo, L.t_hi), L.c_fit, L.pass, L.degenerate ? "L identically zero" : "");
    } else if (c == "H") {
      if (o.status != wave::Status::blew_up) {
        row("H", "", NAN, std::nullopt, "requires a blow-up run");
        continue;
      }
      const diag::InequalityCheck H = diag::check_H_inequality(need_trace(), p, p.eps, need_g2().c_G2, o.T_est);
      row("H", window(H.t_lo, H.t_hi), H.c_fit, H.pass, "");
    } else if (c == "weak") {
      if (!kit) kit.emplace(p);
      for (auto [name, choice] : {std::pair{"weak_psi", diag::TestChoice::psi}, std::pair{"weak_one", diag::TestChoice::one}}) {
        const double r1 = diag::weak_form_residual(o, choice, &*kit, t_weak).residual;
        const double r2 = diag::weak_form_residual(need_fine(), choice, &*kit, t_weak).residual;
        row(name, window(0.0, t_weak), r1, r2 <= 0.6 * r1, "residual at dr/2 " + csv::num(r2));
      }
    } else if (c == "transform") {
      if (!linear) {
        row("transform", "", NAN, std::nullopt, "requires a=b=0");
        continue;
      }
      const auto which = p.delta() >= 0 ? diag::Transform::damped_v : diag::Transform::liouville_w;
      const double r1 = diag::transform_residual(o, which);
      const double r2 = diag::transform_residual(need_fine(), which);
      row("transform", window(0.0, o.t_end), r1, r1 <= 5e-2 && r2 <= 0.5 * r1,
          std::string(which == diag::Transform::damped_v ? "DAMPED_V" : "LIOUVILLE_W") + " residual at dr/2 " +
              csv::num(r2));
    } else {
      throw cli::ConfigError("--checks", 0, "unknown check '" + c + "'");
    }
  }

  const auto& sch = csv::schema("diagnose");
  std::cout << csv::render(sch, rows);
  OutputSession s("diagnose", parent_of(out), stem_of(out), seed);
  s.set_config(run.cfg, false);
  s.param("run", prefix);
  s.emit(out, sch, rows);
  return s.finish(all_pass ? 0 : kExitAcceptance);
}

int cmd_sweep(const std::string& config, const std::string& out, unsigned long long seed) {
  const cli::RunConfig cfg = cli::parse_config(config);
  lifespan::SweepPlan plan;
  plan.base = cfg.params;
  plan.eps_list = cfg.eps_list;
  plan.dr_ladder = cfg.dr_ladder.empty() ? std::vector<double>{2 * cfg.dr, cfg.dr} : cfg.dr_ladder;
  plan.cfl = cfg.cfl;
  plan.threshold = cfg.threshold;
  plan.safety = cfg.safety;
  plan.first_horizon = cfg.t_max;
  plan.max_horizon = cfg.t_max_cap;
  const lifespan::SweepResult r = lifespan::run_sweep(plan);

  OutputSession s("sweep", parent_of(out), stem_of(out), seed);
  s.set_config(cfg, true);
  std::vector<csv::Row> rows;
  bool unresolved = false;
  for (const auto& rec : r.records) {
    rows.push_back({csv::num(rec.eps), csv::num(rec.T_est), rec.converged ? "true" : "false", csv::num(rec.grid_dr)});
    unresolved = unresolved || rec.status == wave::Status::unresolved;
  }
  s.emit(out, csv::schema("sweep"), rows);
  const std::string theory =
      r.theory.kind == exponents::LifespanExponent::Kind::none ? std::string() : csv::num(r.theory.value);
  const csv::Row summary{r.fit ? csv::num(r.fit->slope) : "", r.fit ? csv::num(r.fit->intercept) : "",
                         r.fit ? csv::num(r.fit->r_squared) : "", theory, lifespan::to_string(r.verdict)};
  fs::path summary_path = fs::path(out);
  summary_path.replace_filename(summary_path.stem().string() + "_summary.csv");
  s.emit(summary_path, csv::schema("sweep_summary"), {summary});
  std::cout << csv::render(csv::schema("sweep"), rows) << '\n'
            << csv::render(csv::schema("sweep_summary"), {summary});
  if (!r.note.empty()) std::cout << "note: " << r.note << '\n';
  return s.finish(unresolved ? kExitNumerical : 0);
}

int cmd_check() {
  bool ok = true;
  for (const auto& r : acceptance::run_criteria(acceptance::fast_suite(), std::cout)) ok = ok && r.pass;
  return ok ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up laboratory for damped, massive semilinear wave equations"};
  app.require_subcommand(1);
  unsigned long long seed = 42;
  app.add_option("--seed", seed, "seed recorded in run manifests")->capture_default_str();

  double xi = 0, t = 1;
  std::string out;
  auto* sf = app.add_subcommand("specfun", "evaluate K_xi(t) with its error estimate");
  sf->add_option("--xi", xi, "order")->required();
  sf->add_option("--t", t, "argument")->required();
  sf->add_option("--out", out, "optional CSV file");

  ModelFlags model;
  auto* ex = app.add_subcommand("exponents", "critical exponents, region and lifespan exponent");
  model.add(ex, false);
  ex->add_option("--out", out, "CSV file (stdout when omitted)");

  auto* tf = app.add_subcommand("testfunc", "test-function identities and dumps");
  tf->require_subcommand(1);
  auto* tfc = tf->add_subcommand("check", "run the identity suite");
  auto* tfd = tf->add_subcommand("dump", "tabulate rho, phi or Gamma");
  std::string what = "rho", grid = "0:10:101";
  double tmu = 2.0, tnu = 0.0;
  int tN = 1;
  tfd->add_option("--what", what)->check(CLI::IsMember({"rho", "phi", "gamma"}));
  tfd->add_option("--grid", grid, "lo:hi:count")->capture_default_str();
  tfd->add_option("--mu", tmu)->capture_default_str();
  tfd->add_option("--nu", tnu)->capture_default_str();
  tfd->add_option("--N", tN)->capture_default_str();
  tfd->add_option("--out", out, "CSV file (stdout when omitted)");

  auto* lo = app.add_subcommand("linode", "integrate the linear ODE for F1");
  double lmu = 10, lnu = 4, ltmax = 20, lrtol = 1e-10;
  std::vector<double> ic{1.0, 0.0};
  lo->add_option("--mu", lmu)->capture_default_str();
  lo->add_option("--nu", lnu)->capture_default_str();
  lo->add_option("--ic", ic, "F1(0),F1'(0)")->delimiter(',')->expected(2);
  lo->add_option("--tmax", ltmax)->capture_default_str();
  lo->add_option("--rtol", lrtol)->capture_default_str();
  lo->add_option("--out", out, "trace CSV");
  auto* lof = lo->add_subcommand("figures", "the four reference (mu,nu) cases");
  std::string out_dir = ".";
  lof->add_option("--out-dir", out_dir)->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "run the finite-difference solver");
  model.add(sim, true);
  int snapshots = 0;
  std::string prefix = "run";
  sim->add_option("--snapshots", snapshots, "number of snapshot files")->capture_default_str();
  sim->add_option("--out", prefix, "output prefix")->capture_default_str();

  auto* dg = app.add_subcommand("diagnose", "functionals and inequality checks for a simulate run");
  std::string run_prefix, checks_arg = "g1,g2,L,H,weak";
  double every = 0.05;
  dg->add_option("--run", run_prefix, "prefix given to simulate")->required();
  dg->add_option("--checks", checks_arg, "g1,g2,L,H,weak,transform")->capture_default_str();
  dg->add_option("--every", every, "snapshot cadence of the replayed run")->capture_default_str();
  dg->add_option("--out", out, "report CSV")->required();

  auto* sw = app.add_subcommand("sweep", "lifespan sweep over eps");
  std::string sweep_cfg;
  sw->add_option("--config", sweep_cfg, "plan file")->required()->check(CLI::ExistingFile);
  sw->add_option("--out", out, "sweep CSV")->required();

  auto* ck = app.add_subcommand("check", "fast acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (sf->parsed()) return cmd_specfun(xi, t, out, seed);
    if (ex->parsed()) return cmd_exponents(model, out, seed);
    if (tfc->parsed()) return cmd_testfunc_check();
    if (tfd->parsed()) return cmd_testfunc_dump(what, grid, tmu, tnu, tN, out, seed);
    if (lof->parsed()) return cmd_linode_figures(out_dir, seed);
    if (lo->parsed()) {
      if (out.empty()) throw cli::ConfigError("linode", 0, "--out is required");
      return cmd_linode(lmu, lnu, ic, ltmax, lrtol, out, seed);
    }
    if (sim->parsed()) return cmd_simulate(model, snapshots, prefix, seed);
    if (dg->parsed()) {
      std::vector<std::string> checks;
      std::stringstream ss(checks_arg);
      for (std::string c; std::getline(ss, c, ',');)
        if (!c.empty()) checks.push_back(c);
      return cmd_diagnose(run_prefix, checks, every, out, seed);
    }
    if (sw->parsed()) return cmd_sweep(sweep_cfg, out, seed);
    if (ck->parsed()) return cmd_check();
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const csv::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cli::LockError& e) {
    std::cerr << "lock error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const linode::StepUnderflow& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
