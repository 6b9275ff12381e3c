// Command-line front end: simulators, exact engines, verification
// experiments. Exit codes: 0 success, 1 usage error, 2 numerical failure,
// 3 verification failure.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hitting/chains.hpp"
#include "hitting/exact_r.hpp"
#include "hitting/harness.hpp"
#include "hitting/innovations.hpp"
#include "hitting/zlimit.hpp"

namespace {

using namespace hitting;

struct CommonFlags {
  std::string model_spec;
  double x0 = 0.5;
  double big_a = 2.0;
  double start = 1.5;
  std::int64_t nmax = 100;
  std::vector<std::int64_t> ngrid;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string out_path;
  std::string json_path;
  double tol = 0.25;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_model) {
  auto* model = cmd->add_option("--model", f.model_spec,
                                "model spec, e.g. log-tail:c=0.5");
  if (needs_model) model->required();
  cmd->add_option("--x0", f.x0, "threshold level (log_A units)");
  cmd->add_option("--A", f.big_a, "base A > 1")->default_val(2.0);
  cmd->add_option("--start", f.start, "starting state (log_A units)");
  cmd->add_option("--nmax", f.nmax, "horizon / table size");
  cmd->add_option("--ngrid", f.ngrid, "comma-separated n grid")
      ->delimiter(',');
  cmd->add_option("--reps", f.reps, "Monte Carlo replicates");
  cmd->add_option("--seed", f.seed, "master seed (required with --reps)")
      ->each([&f](const std::string&) { f.seed_set = true; });
  cmd->add_option("--threads", f.threads,
                  "worker threads (speed only, never results)");
  cmd->add_option("--out", f.out_path, "CSV output path");
  cmd->add_option("--json", f.json_path, "JSON output path");
  cmd->add_option("--tol", f.tol, "trend tolerance");
}

void require_seed(const CommonFlags& f) {
  if (!f.seed_set)
    throw CLI::ValidationError("--seed", "stochastic runs require --seed");
}

int run_simulate(const CommonFlags& f, const std::string& kind_name) {
  require_seed(f);
  ChainKind kind = ChainKind::RandomExchange;
  if (kind_name == "ar1") kind = ChainKind::ArOne;
  else if (kind_name == "max-ar") kind = ChainKind::MaxAr;
  else if (kind_name != "exchange")
    throw CLI::ValidationError("--kind", "unknown chain kind: " + kind_name);

  const auto model = parse_model_spec(f.model_spec);
  SimConfig config;
  config.big_a = f.big_a;
  config.x0_log = f.x0;
  config.start_log = f.start;
  config.horizon_cap = f.nmax;
  config.master_seed = f.seed;
  config.replicates = f.reps > 0 ? f.reps : 1000;
  config.threads = f.threads;

  const auto grid = f.ngrid.empty()
                        ? std::vector<std::int64_t>{f.nmax}
                        : f.ngrid;
  const auto est = estimate_tail(kind, model, config, grid);
  std::string csv = "n,p_hat,std_err,replicates\n";
  for (const auto& te : est) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%lld\n",
                  static_cast<long long>(te.n), te.p_hat, te.std_err,
                  static_cast<long long>(te.replicates));
    csv += buf;
  }
  if (!f.out_path.empty()) {
    std::ofstream out(f.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + f.out_path);
    out << csv;
  } else {
    std::cout << csv;
  }
  return 0;
}

int run_exact_tail(const CommonFlags& f) {
  const auto model = parse_model_spec(f.model_spec);
  const int nmax = static_cast<int>(f.nmax);
  const auto grid = cdf_grid(model, f.x0, nmax + 1);
  const auto table = tail_table(grid, nmax);
  if (!f.out_path.empty())
    write_tail_csv(table, f.out_path);
  else
    for (std::size_t n = 0; n < table.v.size(); ++n)
      std::printf("%zu,%.17g\n", n, table.v[n]);
  return 0;
}

int run_harmonic(const CommonFlags& f) {
  const auto model = parse_model_spec(f.model_spec);
  const int nmax = static_cast<int>(f.nmax);
  const auto grid = cdf_grid(model, f.x0, nmax + 1);
  const auto table = harmonic_table(grid, nmax);
  if (!f.out_path.empty())
    write_harmonic_csv(table, f.out_path);
  else
    for (std::size_t n = 0; n < table.G.size(); ++n)
      std::printf("%zu,%.17g\n", n, table.G[n]);
  return 0;
}

int run_expected_t(const CommonFlags& f) {
  const auto model = parse_model_spec(f.model_spec);
  const auto grid = cdf_grid(model, f.x0, static_cast<int>(f.nmax));
  const double u = expected_T_exact(grid, f.start);
  std::printf("%.17g\n", u);
  return 0;
}

int run_zlaw(const CommonFlags& f, double c, double z, double t) {
  const ZParams params{c};
  std::printf("t0_tail=%.17g\n", t0_tail(params, z, t));
  return 0;
}

int run_classify(const CommonFlags& f) {
  const auto model = parse_model_spec(f.model_spec);
  std::printf("%s\n", classification_name(classify(model)).c_str());
  return 0;
}

int run_verify(const CommonFlags& f, const std::string& experiment) {
  auto spec = default_spec(parse_experiment_name(experiment));
  if (!f.model_spec.empty()) spec.model_spec = f.model_spec;
  if (f.x0 != 0.5) spec.x0 = f.x0;
  spec.big_a = f.big_a;
  if (f.start != 1.5) spec.start_log = f.start;
  if (!f.ngrid.empty()) spec.n_grid = f.ngrid;
  if (f.reps > 0) {
    require_seed(f);
    spec.replicates = f.reps;
  }
  if (f.seed_set) spec.seed = f.seed;
  spec.tol = f.tol;
  spec.threads = f.threads;

  const auto rec = run_experiment(spec);
  if (!f.out_path.empty()) write_csv(rec, f.out_path);
  if (!f.json_path.empty()) write_json(rec, f.json_path);
  for (const auto& r : rec.rows)
    std::printf("%-40s n=%-8g observed=%-14.8g ratio=%-10.6g %s\n",
                r.label.c_str(), r.n, r.observed, r.ratio,
                r.pass ? "pass" : "FAIL");
  std::printf("%s: %s\n", rec.experiment.c_str(),
              rec.pass ? "PASS" : "FAIL");
  return rec.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hitting-time laws for AR(1), max-autoregressive and random "
               "exchange chains"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string kind_name = "exchange";
  double z_c = 0.5, z_z = 1.0, z_t = 2.0;
  std::string experiment;

  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo survival probabilities P_x(T > n)");
  add_common(simulate, f, true);
  simulate->add_option("--kind", kind_name, "ar1 | max-ar | exchange");

  auto* exact_tail = app.add_subcommand(
      "exact-tail", "exact survival recursion v_n (CSV n,v_n)");
  add_common(exact_tail, f, true);

  auto* harmonic = app.add_subcommand(
      "harmonic", "harmonic function table G_n (CSV n,G_n)");
  add_common(harmonic, f, true);

  auto* expected_t = app.add_subcommand(
      "expected-t", "closed-form expected hitting time E_x[T]");
  add_common(expected_t, f, true);

  auto* zlaw = app.add_subcommand(
      "zlaw", "limit-process hitting law P_z(T_0 > t)");
  add_common(zlaw, f, false);
  zlaw->add_option("--c", z_c, "index c in (0,1)")->required();
  zlaw->add_option("--z", z_z, "starting point z > 0");
  zlaw->add_option("--t", z_t, "horizon t > 0");

  auto* classify_cmd = app.add_subcommand(
      "classify", "recurrence classification of the chain");
  add_common(classify_cmd, f, true);

  auto* verify = app.add_subcommand(
      "verify", "run a named verification experiment");
  add_common(verify, f, false);
  verify
      ->add_option("experiment", experiment,
                   "thm2 | thm4 | thm5 | zlaw | funclimit | sandwich | oracles")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(f, kind_name);
    if (exact_tail->parsed()) return run_exact_tail(f);
    if (harmonic->parsed()) return run_harmonic(f);
    if (expected_t->parsed()) return run_expected_t(f);
    if (zlaw->parsed()) return run_zlaw(f, z_c, z_z, z_t);
    if (classify_cmd->parsed()) return run_classify(f);
    if (verify->parsed()) return run_verify(f, experiment);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
