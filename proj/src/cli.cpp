#include "drsplit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "drsplit/errors.hpp"
#include "drsplit/parallel.hpp"
#include "drsplit/pgm.hpp"
#include "drsplit/selftest.hpp"

namespace drsplit {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Option storage; optional values are tracked through the option counts.
struct Parsed {
  CliConfig cfg;
  std::string model = "tv";
  std::string algorithm = "adr";
  double alpha = 0.0, sigma = 0.0, tau = 0.0, gamma = 0.0, noise = 0.0;
  // one entry per subcommand that registers the option
  std::vector<CLI::Option*> alpha_opt, sigma_opt, tau_opt, gamma_opt, noise_opt;
  CLI::App* denoise = nullptr;
  CLI::App* bench = nullptr;
  CLI::App* selftest = nullptr;
};

void add_run_options(CLI::App* sub, Parsed& p) {
  CliConfig& c = p.cfg;
  sub->add_option("--input,-i", c.input, "input PGM (P5 or P2)");
  sub->add_option("--output,-o", c.output, sub->get_name() == "bench" ? "CSV table (default stdout)"
                                                                      : "denoised PGM");
  sub->add_option("--synthetic", c.synthetic, "use the built-in WxH test scene");
  sub->add_option("--model", p.model, "tv or huber")->check(CLI::IsMember({"tv", "huber"}));
  p.alpha_opt.push_back(sub->add_option("--alpha", p.alpha, "regularization weight"));
  sub->add_option("--lambda", c.lambda, "Huber parameter");
  p.sigma_opt.push_back(sub->add_option("--sigma,--sigma0", p.sigma, "initial primal step"));
  p.tau_opt.push_back(sub->add_option("--tau,--tau0", p.tau, "initial dual step"));
  p.gamma_opt.push_back(sub->add_option("--gamma", p.gamma, "acceleration factor override"));
  sub->add_option("--precond", c.precond, "exact, richardson[:l], jacobi[:l], gs<n>, ssor:<w>:<n>");
  sub->add_option("--tol", c.tol, "per-pixel gap tolerance");
  sub->add_option("--max-iter", c.max_iter, "iteration limit");
  sub->add_option("--seed", c.seed, "noise seed");
  p.noise_opt.push_back(sub->add_option("--noise", p.noise, "Gaussian noise standard deviation"));
  sub->add_option("--csv", c.csv, "convergence log");
  sub->add_option("--log-every", c.log_every, "gap evaluation interval");
  sub->add_option("--threads", c.threads, "worker threads (1 = deterministic)");
  sub->add_flag("--permissive", c.permissive, "warn instead of refusing unverified step sizes");
}

void build_app(CLI::App& app, Parsed& p) {
  app.require_subcommand(1);
  p.denoise = app.add_subcommand("denoise", "denoise one image");
  add_run_options(p.denoise, p);
  p.denoise->add_option("--algorithm,-a", p.algorithm, "dr, pdr, adr, padr, adrsc, padrsc");

  p.bench = app.add_subcommand("bench", "iterations and time per algorithm and tolerance");
  add_run_options(p.bench, p);
  p.bench->add_option("--algorithms", p.cfg.algorithms, "rows: alg[@precond], comma separated")
      ->delimiter(',');
  p.bench->add_option("--tolerances", p.cfg.tolerances, "columns, comma separated")->delimiter(',');

  p.selftest = app.add_subcommand("selftest", "dense-oracle and invariant checks");
  p.selftest->add_option("--inject-fault", p.cfg.inject_fault, "mutation hook (div-sign)");
  p.selftest->add_option("--threads", p.cfg.threads, "worker threads");
}

bool given(const std::vector<CLI::Option*>& opts) {
  return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
}

std::pair<std::size_t, std::size_t> synthetic_size(const std::string& text) {
  std::size_t w = 0, h = 0;
  char x = 0, extra = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || x != 'x' || (in >> extra) || w == 0 || h == 0)
    throw ConfigError("--synthetic expects WxH, got '" + text + "'");
  return {w, h};
}

CliConfig finish(Parsed& p) {
  CliConfig c = p.cfg;
  if (p.denoise->parsed()) c.subcommand = Subcommand::denoise;
  else if (p.bench->parsed()) c.subcommand = Subcommand::bench;
  else c.subcommand = Subcommand::selftest;
  c.model = parse_model(p.model);
  c.algorithm = parse_algorithm(p.algorithm);
  if (given(p.alpha_opt)) c.alpha = p.alpha;
  if (given(p.sigma_opt)) c.sigma0 = p.sigma;
  if (given(p.tau_opt)) c.tau0 = p.tau;
  if (given(p.gamma_opt)) c.gamma = p.gamma;
  if (given(p.noise_opt)) c.noise = p.noise;
  if (c.threads < 1) throw ConfigError("--threads must be at least 1");
  if (c.log_every < 1) throw ConfigError("--log-every must be at least 1");
  if (c.max_iter < 0) throw ConfigError("--max-iter must be nonnegative");
  if (c.tolerances.empty()) throw ConfigError("--tolerances must not be empty");
  if (c.algorithms.empty()) throw ConfigError("--algorithms must not be empty");
  parse_preconditioner_spec(c.precond);
  if (c.subcommand != Subcommand::selftest) {
    if (c.synthetic.empty() && c.input.empty()) throw ConfigError("either --input or --synthetic is required");
    if (!c.synthetic.empty()) synthetic_size(c.synthetic);
  }
  return c;
}

std::vector<std::string> reversed(std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

CliConfig parse_cli(const std::vector<std::string>& args) {
  CLI::App app("drsplit");
  Parsed p;
  build_app(app, p);
  try {
    auto rev = reversed(args);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }
  return finish(p);
}

std::vector<std::string> to_args(const CliConfig& c) {
  std::vector<std::string> a;
  auto opt = [&a](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  if (c.subcommand == Subcommand::selftest) {
    a.push_back("selftest");
    if (!c.inject_fault.empty()) opt("--inject-fault", c.inject_fault);
    opt("--threads", std::to_string(c.threads));
    return a;
  }
  a.push_back(c.subcommand == Subcommand::denoise ? "denoise" : "bench");
  if (!c.input.empty()) opt("--input", c.input);
  if (!c.output.empty()) opt("--output", c.output);
  if (!c.synthetic.empty()) opt("--synthetic", c.synthetic);
  opt("--model", to_string(c.model));
  if (c.alpha) opt("--alpha", num(*c.alpha));
  opt("--lambda", num(c.lambda));
  if (c.subcommand == Subcommand::denoise) opt("--algorithm", to_string(c.algorithm));
  if (c.sigma0) opt("--sigma", num(*c.sigma0));
  if (c.tau0) opt("--tau", num(*c.tau0));
  if (c.gamma) opt("--gamma", num(*c.gamma));
  opt("--precond", c.precond);
  opt("--tol", num(c.tol));
  opt("--max-iter", std::to_string(c.max_iter));
  opt("--seed", std::to_string(c.seed));
  if (c.noise) opt("--noise", num(*c.noise));
  if (!c.csv.empty()) opt("--csv", c.csv);
  opt("--log-every", std::to_string(c.log_every));
  opt("--threads", std::to_string(c.threads));
  if (c.permissive) a.push_back("--permissive");
  if (c.subcommand == Subcommand::bench) {
    std::string algs, tols;
    for (const auto& s : c.algorithms) algs += (algs.empty() ? "" : ",") + s;
    for (double t : c.tolerances) tols += (tols.empty() ? "" : ",") + num(t);
    opt("--algorithms", algs);
    opt("--tolerances", tols);
  }
  return a;
}

double default_alpha(Model m) { return m == Model::tv ? 0.5 : 1.0; }

double default_sigma(Algorithm a) {
  if (a == Algorithm::adrsc) return 0.2;
  if (a == Algorithm::padrsc) return 0.15;
  return 1.0;
}

GridImage load_input(const CliConfig& c) {
  GridImage img;
  if (!c.synthetic.empty()) {
    const auto [w, h] = synthetic_size(c.synthetic);
    img = synthetic_scene(w, h);
  } else if (!c.input.empty()) {
    img = read_pgm(c.input);
  } else {
    throw ConfigError("either --input or --synthetic is required");
  }
  if (c.noise) img = add_gaussian_noise(img, *c.noise, c.seed);
  return img;
}

RunConfig make_run_config(const CliConfig& c, Algorithm alg, const std::string& precond) {
  RunConfig rc;
  rc.algorithm = alg;
  rc.sigma0 = c.sigma0.value_or(default_sigma(alg));
  rc.tau0 = c.tau0;
  rc.gamma = c.gamma;
  rc.precond = parse_preconditioner_spec(precond);
  rc.max_iter = c.max_iter;
  rc.gap_tol_per_pixel = c.tol;
  rc.log_every = c.log_every;
  rc.strict = !c.permissive;
  return rc;
}

void write_csv_log(std::ostream& out, const std::vector<LogRecord>& history) {
  out << kCsvHeader << '\n';
  char buf[160];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.gap_per_pixel,
                  r.primal_energy, r.dual_energy, r.elapsed_ms);
    out << buf;
  }
}

namespace {

SaddleProblem problem_for(const CliConfig& c, const GridImage& f) {
  DenoiseSpec spec;
  spec.model = c.model;
  spec.alpha = c.alpha.value_or(default_alpha(c.model));
  spec.lambda = c.lambda;
  spec.f = f;
  return build_denoise(spec);
}

void print_warnings(const ResolvedParams& p, std::ostream& err) {
  for (const auto& w : p.warnings) err << "warning: " << w << '\n';
}

}  // namespace

int run_denoise(const CliConfig& c, std::ostream& out, std::ostream& err) {
  set_num_threads(c.threads);
  const GridImage f = load_input(c);
  const SaddleProblem pr = problem_for(c, f);
  const RunConfig rc = make_run_config(c, c.algorithm, c.precond);
  const RunResult res = run(pr, rc);
  print_warnings(res.params, err);

  if (!c.output.empty()) write_pgm(GridImage(f.width(), f.height(), res.state.x), c.output);
  if (!c.csv.empty()) {
    std::ofstream csv(c.csv);
    if (!csv) throw IoError("cannot open '" + c.csv + "' for writing");
    write_csv_log(csv, res.history);
    if (!csv) throw IoError("error writing '" + c.csv + "'");
  }
  const double gap = res.history.empty() ? 0.0 : res.history.back().gap_per_pixel;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "algorithm %s\niterations %ld\nelapsed_ms %.3f\ngap_per_pixel %.6g\nconverged %s\n",
                to_string(c.algorithm).c_str(), res.iterations, res.elapsed_ms, gap,
                res.converged ? "yes" : "no");
  out << buf;
  return kExitOk;
}

int run_bench(const CliConfig& c, std::ostream& out, std::ostream& err) {
  set_num_threads(c.threads);
  const GridImage f = load_input(c);
  const SaddleProblem pr = problem_for(c, f);
  const double tol_min = *std::min_element(c.tolerances.begin(), c.tolerances.end());

  std::ostringstream table;
  table << "algorithm";
  char buf[128];
  for (double t : c.tolerances) {
    std::snprintf(buf, sizeof buf, ",%g", t);
    table << buf;
  }
  table << '\n';

  for (const auto& row : c.algorithms) {
    const auto at = row.find('@');
    const Algorithm alg = parse_algorithm(row.substr(0, at));
    const std::string precond = at == std::string::npos ? c.precond : row.substr(at + 1);
    RunConfig rc = make_run_config(c, alg, precond);
    rc.gap_tol_per_pixel = tol_min;
    std::vector<std::optional<LogRecord>> hit(c.tolerances.size());
    RunCallbacks cb;
    cb.on_log = [&](const LogRecord& r) {
      for (std::size_t i = 0; i < hit.size(); ++i)
        if (!hit[i] && r.gap_per_pixel <= c.tolerances[i]) hit[i] = r;
    };
    const RunResult res = run(pr, rc, cb);
    print_warnings(res.params, err);
    table << row;
    for (const auto& h : hit) {
      if (h) {
        std::snprintf(buf, sizeof buf, ",\"%ld,%.1f\"", h->iter, h->elapsed_ms);
        table << buf;
      } else {
        table << ",NA";
      }
    }
    table << '\n';
  }

  if (c.output.empty()) {
    out << table.str();
  } else {
    std::ofstream file(c.output);
    if (!file) throw IoError("cannot open '" + c.output + "' for writing");
    file << table.str();
    if (!file) throw IoError("error writing '" + c.output + "'");
  }
  return kExitOk;
}

int run_selftest(const CliConfig& c, std::ostream& out, std::ostream&) {
  set_num_threads(c.threads);
  const auto checks = run_selftest_suite(c.inject_fault);
  bool ok = true;
  for (const auto& ch : checks) {
    out << (ch.passed ? "PASS " : "FAIL ") << ch.name;
    if (!ch.detail.empty()) out << "  " << ch.detail;
    out << '\n';
    ok = ok && ch.passed;
  }
  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? kExitOk : kExitSelftestFailed;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App app("Douglas-Rachford saddle-point solvers for TV and Huber-TV denoising");
  Parsed p;
  build_app(app, p);
  try {
    auto rev = reversed(args);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const CliConfig c = finish(p);
    switch (c.subcommand) {
      case Subcommand::denoise: return run_denoise(c, std::cout, std::cerr);
      case Subcommand::bench: return run_bench(c, std::cout, std::cerr);
      case Subcommand::selftest: return run_selftest(c, std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace drsplit
