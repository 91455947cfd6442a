#include "cogniopt/cli/commands.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace cogniopt::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kLn2 = std::numbers::ln2;

const char* bool_text(bool b) { return b ? "true" : "false"; }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
}

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
  fs::path dir = opts.out_dir ? *opts.out_dir : fs::path(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    const CommandOptions& opts, const std::vector<fs::path>& outputs) {
  nlohmann::ordered_json m;
  m["tool"] = "cogniopt";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config"] = opts.config_path.string();
  m["seed"] = opts.seed;
  m["threads"] = opts.threads;
  m["capacity_law_override"] = opts.capacity_law ? to_string(*opts.capacity_law) : "";
  m["resolved"] = cfg.resolved();
  std::vector<std::string> names;
  for (const auto& p : outputs) names.push_back(p.filename().string());
  m["outputs"] = names;
  write_file(dir / ("manifest_" + command + ".json"), m.dump(2) + "\n");
}

RunConfig apply_overrides(RunConfig cfg, const CommandOptions& opts) {
  if (opts.capacity_law) cfg.scenario.capacity_law = *opts.capacity_law;
  return cfg;
}

std::string block_header(double sensed_snr, const RunConfig& cfg) {
  std::ostringstream os;
  os << "# sensed_snr_db=" << format_double(linear_to_db(sensed_snr))
     << " num_samples=" << cfg.num_samples << " noise_variance=" << format_double(cfg.noise_variance)
     << "\n";
  return os.str();
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string roc_csv(const RunConfig& cfg) {
  std::ostringstream os;
  for (std::size_t k = 0; k < cfg.sensed_snrs.size(); ++k) {
    if (k > 0) os << "\n";
    os << block_header(cfg.sensed_snrs[k], cfg);
    os << "eta,p_false_alarm,p_detection,p_missed\n";
    for (const auto& pt : roc_curve(cfg.sensing(k), cfg.eta_grid)) {
      os << format_double(pt.threshold) << ',' << format_double(pt.p_false_alarm) << ','
         << format_double(pt.p_detection) << ',' << format_double(pt.p_missed) << '\n';
    }
  }
  return os.str();
}

std::vector<OptimizeRun> optimize_runs(const RunConfig& cfg, unsigned threads) {
  std::vector<OptimizeRun> runs;
  for (std::size_t k = 0; k < cfg.sensed_snrs.size(); ++k) {
    for (double pav : cfg.avg_power_budgets) {
      ScenarioConfig sc = cfg.scenario;
      sc.avg_power_budget = pav;
      OptimizeRun run;
      run.sensed_snr = cfg.sensed_snrs[k];
      run.avg_power_budget = pav;
      run.result = threshold_search(cfg.sensing(k), cfg.channel, sc, cfg.eta_search, cfg.solver, threads);
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

std::string optimize_sweep_csv(const ThresholdSearchResult& result) {
  std::ostringstream os;
  os << "eta,lambda_star,C_s,H,I,C_p_loss,gap,iters,feasible\n";
  for (const auto& r : result.sweep) {
    os << format_double(r.eta) << ',' << format_double(r.lambda_star) << ',' << format_double(r.capacity)
       << ',' << format_double(r.avg_power) << ',' << format_double(r.interference) << ','
       << format_double(r.pu_loss) << ',' << format_double(r.duality_gap) << ',' << r.iterations << ','
       << bool_text(r.feasible) << '\n';
  }
  return os.str();
}

std::string optimize_summary_csv(const std::vector<OptimizeRun>& runs) {
  std::ostringstream os;
  os << "run,sensed_snr_db,P_av,P_av_db,feasible,eta_star,lambda_star,gamma_s_star,C_s,q,gap,H,I,I_peak,"
        "C_p_loss,loss_budget,converged,iters\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k].result;
    const auto& b = r.best;
    os << k << ',' << format_double(linear_to_db(runs[k].sensed_snr)) << ','
       << format_double(runs[k].avg_power_budget) << ',' << format_double(linear_to_db(runs[k].avg_power_budget))
       << ',' << bool_text(r.feasible);
    if (r.feasible) {
      os << ',' << format_double(b.eta_star) << ',' << format_double(b.lambda_star) << ','
         << format_double(b.cutoff_snr) << ',' << format_double(b.capacity) << ','
         << format_double(b.dual_value) << ',' << format_double(b.duality_gap) << ','
         << format_double(b.avg_power_used) << ',' << format_double(b.interference_used) << ','
         << format_double(b.interference_peak) << ',' << format_double(b.pu_loss) << ','
         << format_double(r.loss_budget) << ',' << bool_text(b.converged) << ',' << b.iterations;
    } else {
      os << ",,,,,,,,,,," << format_double(r.loss_budget) << ",,";
    }
    os << '\n';
  }
  return os.str();
}

std::string ploss_csv(const RunConfig& cfg, CapacityLaw law) {
  ScenarioConfig sc = cfg.scenario;
  sc.capacity_law = law;
  const double cp_max = pu_capacity_max(cfg.channel, sc);
  std::ostringstream os;
  for (std::size_t k = 0; k < cfg.sensed_snrs.size(); ++k) {
    if (k > 0) os << "\n";
    os << block_header(cfg.sensed_snrs[k], cfg);
    os << "# capacity_law=" << to_string(law) << " C_p_max=" << format_double(cp_max) << "\n";
    os << "eta,P_m,P_out,gamma_p_min,C_p_loss\n";
    const auto sp = cfg.sensing(k);
    for (double eta : cfg.eta_grid) {
      PuLossRecord r;
      try {
        r = pu_capacity_loss(eta, sp, cfg.channel, sc);
      } catch (const std::domain_error&) {
        // Outage rounds to 1: report the limit.
        r.eta = eta;
        r.p_missed = r.p_outage = 1.0;
        r.gamma_p_min = std::numeric_limits<double>::infinity();
        r.capacity_loss = cp_max;
      }
      os << format_double(r.eta) << ',' << format_double(r.p_missed) << ',' << format_double(r.p_outage)
         << ',' << format_double(r.gamma_p_min) << ',' << format_double(r.capacity_loss) << '\n';
    }
  }
  return os.str();
}

std::vector<ValidationCheck> run_validation(const RunConfig& cfg, std::uint64_t seed, unsigned threads) {
  const auto sp = cfg.sensing(0);
  const auto& ch = cfg.channel;
  ScenarioConfig sc = cfg.scenario;
  sc.avg_power_budget = cfg.avg_power_budgets.front();
  const double sigma2 = sp.noise_variance;

  auto tol = [&](const std::string& name, double fallback) {
    const auto it = cfg.validation.tolerance_overrides.find(name);
    return it == cfg.validation.tolerance_overrides.end() ? fallback : it->second;
  };

  std::vector<ValidationCheck> checks;
  auto run = [&](const std::string& name, double tolerance, const std::function<double(std::string&)>& body) {
    ValidationCheck c;
    c.name = name;
    c.tolerance = tolerance;
    try {
      c.measured = body(c.detail);
      c.passed = std::isfinite(c.measured) && c.measured <= tolerance;
    } catch (const std::exception& e) {
      c.measured = std::numeric_limits<double>::quiet_NaN();
      c.detail = std::string("exception: ") + e.what();
      c.passed = false;
    }
    checks.push_back(std::move(c));
  };

  run("q_function_hp", tol("q_function_hp", 1e-12), [&](std::string& detail) {
    double worst = 0.0;
    for (double x : {-8.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
      const double ref = oracle::reference::q_function_hp(x);
      worst = std::max(worst, std::abs(q_function(x) - ref) / ref);
    }
    detail = "max relative error of Q over |x| <= 8 against 50-digit erfc";
    return worst;
  });

  run("derivative_fd", tol("derivative_fd", 1e-6), [&](std::string& detail) {
    const double h = 1e-6 * sigma2;
    double worst = 0.0;
    for (double eta : linspace(0.9 * sigma2, 1.1 * sigma2, 21)) {
      // Difference the tail side of each probability so the step stays resolvable.
      const double fd_pf = false_alarm_argument(eta, sp) < 0.0
                               ? -(prob_no_false_alarm(eta + h, sp) - prob_no_false_alarm(eta - h, sp)) / (2 * h)
                               : (prob_false_alarm(eta + h, sp) - prob_false_alarm(eta - h, sp)) / (2 * h);
      const double fd_pd = detection_argument(eta, sp) < 0.0
                               ? -(prob_missed(eta + h, sp) - prob_missed(eta - h, sp)) / (2 * h)
                               : (prob_detection(eta + h, sp) - prob_detection(eta - h, sp)) / (2 * h);
      worst = std::max(worst, std::abs(d_pf_deta(eta, sp) - fd_pf) / std::abs(d_pf_deta(eta, sp)));
      worst = std::max(worst, std::abs(d_pd_deta(eta, sp) - fd_pd) / std::abs(d_pd_deta(eta, sp)));
    }
    detail = "max relative error of dP_f/deta, dP_d/deta vs central differences on [0.9, 1.1] sigma^2";
    return worst;
  });

  run("mc_detector", tol("mc_detector", 4.0), [&](std::string& detail) {
    oracle::McConfig mc;
    mc.trials = cfg.validation.mc_trials;
    mc.rng_seed = seed;
    mc.threads = threads;
    const double scale_d = std::sqrt(static_cast<double>(sp.num_samples) / (2 * sp.sensed_snr + 1));
    std::vector<double> eta_f;
    std::vector<double> eta_d;
    for (double p : {0.1, 0.5, 0.9}) {
      eta_f.push_back(threshold_for_false_alarm(p, sp));
      eta_d.push_back(sigma2 * (1 + sp.sensed_snr + q_function_inverse(p) / scale_d));
    }
    double worst = 0.0;
    for (const auto& e : oracle::monte_carlo_detector(eta_f, sp, mc, oracle::Hypothesis::idle)) {
      const double p = prob_false_alarm(e.threshold, sp);
      worst = std::max(worst, std::abs(e.probability - p) / oracle::binomial_stderr(p, e.trials));
    }
    for (const auto& e : oracle::monte_carlo_detector(eta_d, sp, mc, oracle::Hypothesis::active)) {
      const double p = prob_detection(e.threshold, sp);
      worst = std::max(worst, std::abs(e.probability - p) / oracle::binomial_stderr(p, e.trials));
    }
    detail = "max |MC - closed form| in binomial standard errors, " + std::to_string(mc.trials) +
             " trials, 3 thresholds per hypothesis";
    return worst;
  });

  run("waterfill_closed_form", tol("waterfill_closed_form", 1e-6), [&](std::string& detail) {
    if (ch.su_fading.kind != FadingKind::rayleigh) {
      detail = "skipped: SU fading is not Rayleigh";
      return 0.0;
    }
    const double m = ch.su_fading.mean_snr;
    ScenarioConfig uncapped = sc;
    uncapped.peak_interference = 1e12 * ch.gain_sp;
    const auto mom = ergodic_moments(power_policy(1.0, ch, uncapped), ch);
    const double err_p = std::abs(mom.mean_idle_power - oracle::reference::rayleigh_waterfill_power(1.0, ch.noise_power, m));
    const double err_c =
        std::abs(mom.idle_capacity - oracle::reference::rayleigh_waterfill_capacity(1.0, ch.noise_power, m));
    detail = "E(P^0) and C_0 at lambda=1 against exponential-integral closed forms";
    return std::max(err_p, err_c);
  });

  run("capacity_max_closed_form", tol("capacity_max_closed_form", 1e-6), [&](std::string& detail) {
    if (ch.pu_fading.kind != FadingKind::rayleigh) {
      detail = "skipped: PU fading is not Rayleigh";
      return 0.0;
    }
    const double m = ch.pu_fading.mean_snr;
    ScenarioConfig s1 = sc;
    s1.capacity_law = CapacityLaw::shannon_1plus;
    ScenarioConfig s2 = sc;
    s2.capacity_law = CapacityLaw::paper_literal;
    const double e1 = std::abs(pu_capacity_max(ch, s1) - oracle::reference::rayleigh_capacity_max(m));
    const double e2 = std::abs(pu_capacity_max(ch, s2) - oracle::reference::rayleigh_capacity_max_literal(m));
    detail = "C_p_max under both capacity laws against closed forms";
    return std::max(e1, e2);
  });

  run("pu_loss_quadrature", tol("pu_loss_quadrature", 1e-9), [&](std::string& detail) {
    if (ch.pu_fading.kind != FadingKind::rayleigh) {
      detail = "skipped: PU fading is not Rayleigh";
      return 0.0;
    }
    ScenarioConfig s1 = sc;
    s1.capacity_law = CapacityLaw::shannon_1plus;
    const double scale_d = std::sqrt(static_cast<double>(sp.num_samples) / (2 * sp.sensed_snr + 1));
    const double eta = sigma2 * (1 + sp.sensed_snr + q_function_inverse(0.9) / scale_d);
    const auto rec = pu_capacity_loss(eta, sp, ch, s1);
    const double upper = -ch.pu_fading.mean_snr * std::log1p(-rec.p_outage);
    detail = "C_p_loss at P_out=0.1 against composite Gauss-Legendre";
    return std::abs(rec.capacity_loss - oracle::reference::rayleigh_partial_capacity(upper, ch.pu_fading.mean_snr));
  });

  const double eta_mid = 0.5 * (cfg.eta_search.lower + cfg.eta_search.upper);
  const auto solved = subgradient_solve(eta_mid, sp, ch, sc, cfg.solver);

  run("brute_force_dual", tol("brute_force_dual", 1.0), [&](std::string& detail) {
    const auto grid = oracle::default_lambda_grid();
    const auto bf = oracle::brute_force_dual_min(eta_mid, sp, ch, sc, grid);
    const double cell = std::log(grid[1] / grid[0]);
    std::ostringstream os;
    os << "lambda* = " << format_double(solved.lambda_star) << ", grid argmin " << format_double(bf.lambda)
       << ", distance in log-grid cells";
    detail = os.str();
    if (bf.value < solved.dual_value - 1e-9) return std::numeric_limits<double>::infinity();
    return std::abs(std::log(solved.lambda_star / bf.lambda)) / cell;
  });

  run("capacity_surface", tol("capacity_surface", 1.0), [&](std::string& detail) {
    const auto eta_grid = linspace(cfg.eta_search.lower, cfg.eta_search.upper, 50);
    const auto surface =
        oracle::brute_force_capacity_surface(eta_grid, sp, ch, sc, oracle::default_lambda_grid(), threads);
    const auto best = oracle::surface_argmax(surface);
    const auto search = threshold_search(sp, ch, sc, cfg.eta_search, cfg.solver, threads);
    if (best == surface.size() || !search.feasible) {
      detail = "no feasible threshold; both routes agree only if both are infeasible";
      return (best == surface.size()) == !search.feasible ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double cell = eta_grid[1] - eta_grid[0];
    detail = "threshold_search eta* vs 50x100 surface argmax, in eta-grid cells";
    return std::abs(search.best.eta_star - surface[best].eta) / cell;
  });

  run("concavity", tol("concavity", 1e-9), [&](std::string& detail) {
    DualState tight = cfg.solver;
    tight.tolerance = 1e-12;
    const auto regime = concave_regime(sp, 40);
    const auto grid = linspace(regime.lower, regime.upper, regime.grid_points);
    const auto rep = concavity_check(grid, sp, ch, sc, tight, 1e-9, 1e-12, threads);
    detail = "max second difference of optimized C_s on eta >= sigma^2 (1 + gamma)";
    return std::max(rep.max_second_difference, 0.0);
  });

  run("duality_gap", tol("duality_gap", 1e-3), [&](std::string& detail) {
    detail = "|C_s* - q(lambda*)| / max(C_s*, 1e-3) at eta = " + format_double(eta_mid);
    return std::abs(solved.duality_gap) / std::max(solved.capacity, 1e-3);
  });

  run("kkt_slackness", tol("kkt_slackness", 1e-3), [&](std::string& detail) {
    detail = "|lambda* (H - P_av)| / P_av";
    return std::abs(solved.lambda_star * (solved.avg_power_used - sc.avg_power_budget)) / sc.avg_power_budget;
  });

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_lambda(std::log(1e-3), std::log(10.0));

  run("subgradient_inequality", tol("subgradient_inequality", 1e-9), [&](std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double lam = std::exp(log_lambda(rng));
      const double mu = std::exp(log_lambda(rng));
      const auto a = dual_function(lam, eta_mid, sp, ch, sc);
      const auto b = dual_function(mu, eta_mid, sp, ch, sc);
      worst = std::max(worst, a.value + a.subgradient * (mu - lam) / kLn2 - b.value);
    }
    detail = "max of q(lambda) + g (mu - lambda) / ln2 - q(mu) over 100 random pairs";
    return worst;
  });

  run("weak_duality", tol("weak_duality", 1e-9), [&](std::string& detail) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cap = power_cap(ch, sc);
    const auto w = sensing_weights(eta_mid, sp, sc);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
      const double p1 = cap * unit(rng);
      const double p0 = p1 + unit(rng) * std::max(0.0, (sc.avg_power_budget - w.active_share() * p1) / w.idle_share() - p1);
      const auto policy = constant_policy(p0, p1);
      const auto [c0, c1] = ergodic_capacity_pair(policy, ch);
      const double cs = w.mix(c0, c1);
      const double lam = std::exp(log_lambda(rng));
      worst = std::max(worst, cs - dual_function(lam, eta_mid, sp, ch, sc).value);
    }
    detail = "max of C_s(feasible policy) - q(lambda) over 50 random constant policies";
    return std::max(worst, 0.0);
  });

  return checks;
}

std::string format_validation_report(const std::vector<ValidationCheck>& checks) {
  std::ostringstream os;
  int failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) ++failed;
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-26s measured=%-13.6g tolerance=%-10.3g ", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.measured, c.tolerance);
    os << line << c.detail << '\n';
  }
  os << (checks.size() - failed) << "/" << checks.size() << " checks passed\n";
  return os.str();
}

int cmd_roc(const RunConfig& cfg0, const CommandOptions& opts, std::ostream& out, std::ostream&) {
  const auto cfg = apply_overrides(cfg0, opts);
  const auto dir = output_dir(cfg, opts);
  const fs::path file = dir / "roc.csv";
  write_file(file, roc_csv(cfg));
  write_manifest(dir, "roc", cfg, opts, {file});
  out << "wrote " << file.string() << '\n';
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg0, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const auto cfg = apply_overrides(cfg0, opts);
  const auto dir = output_dir(cfg, opts);
  const auto runs = optimize_runs(cfg, opts.threads);
  std::vector<fs::path> files;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const fs::path f = dir / ("optimize_sweep_" + std::to_string(k) + ".csv");
    write_file(f, optimize_sweep_csv(runs[k].result));
    files.push_back(f);
  }
  const fs::path summary = dir / "optimize_result.csv";
  write_file(summary, optimize_summary_csv(runs));
  files.push_back(summary);
  write_manifest(dir, "optimize", cfg, opts, files);

  int code = kExitOk;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k].result;
    if (!r.feasible) {
      err << "run " << k << " infeasible: " << r.binding_constraint << '\n';
      code = kExitInfeasible;
      continue;
    }
    out << "run " << k << ": P_av=" << format_double(linear_to_db(runs[k].avg_power_budget))
        << " dB eta*=" << format_double(r.best.eta_star) << " lambda*=" << format_double(r.best.lambda_star)
        << " C_s*=" << format_double(r.best.capacity) << " gap=" << format_double(r.best.duality_gap) << '\n';
  }
  out << "wrote " << summary.string() << '\n';
  return code;
}

int cmd_ploss(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream&) {
  const auto dir = output_dir(cfg, opts);
  std::vector<CapacityLaw> laws{CapacityLaw::shannon_1plus, CapacityLaw::paper_literal};
  if (opts.capacity_law) laws = {*opts.capacity_law};
  std::vector<fs::path> files;
  for (auto law : laws) {
    const fs::path f = dir / ("ploss_" + to_string(law) + ".csv");
    write_file(f, ploss_csv(cfg, law));
    files.push_back(f);
    out << "wrote " << f.string() << '\n';
  }
  write_manifest(dir, "ploss", cfg, opts, files);
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg0, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const auto cfg = apply_overrides(cfg0, opts);
  const auto checks = run_validation(cfg, opts.seed, opts.threads);
  const auto report = format_validation_report(checks);
  out << report;
  if (opts.out_dir || !cfg.output_dir.empty()) {
    const auto dir = output_dir(cfg, opts);
    const fs::path f = dir / "validate_report.txt";
    write_file(f, report);
    write_manifest(dir, "validate", cfg, opts, {f});
  }
  bool ok = true;
  for (const auto& c : checks) {
    if (!c.passed) {
      err << "validation check failed: " << c.name << '\n';
      ok = false;
    }
  }
  return ok ? kExitOk : kExitValidation;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensing-threshold and power optimization for sensing-based spectrum sharing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = oracle::kDefaultSeed;
  int threads = 0;
  std::string law_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON scenario file")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Random seed for Monte-Carlo checks");
    sub->add_option("--threads", threads, "Worker threads (fallback: COGNIOPT_THREADS)")->check(CLI::PositiveNumber);
    sub->add_option("--capacity-law", law_text, "PU capacity law")->check(CLI::IsMember({"shannon", "paper"}));
  };
  auto* roc = app.add_subcommand("roc", "Detector operating characteristics");
  auto* optimize = app.add_subcommand("optimize", "Joint power and threshold optimization");
  auto* ploss = app.add_subcommand("ploss", "PU capacity loss versus threshold");
  auto* validate = app.add_subcommand("validate", "Oracle cross-validation report");
  for (auto* sub : {roc, optimize, ploss, validate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  CommandOptions opts;
  opts.config_path = config_path;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.seed = seed;
  opts.threads = 1;
  if (threads > 0) {
    opts.threads = static_cast<unsigned>(threads);
  } else if (const char* env = std::getenv("COGNIOPT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) opts.threads = static_cast<unsigned>(v);
  }
  if (!law_text.empty()) opts.capacity_law = parse_capacity_law(law_text);

  try {
    const auto cfg = load_config(opts.config_path);
    if (roc->parsed()) return cmd_roc(cfg, opts, out, err);
    if (optimize->parsed()) return cmd_optimize(cfg, opts, out, err);
    if (ploss->parsed()) return cmd_ploss(cfg, opts, out, err);
    return cmd_validate(cfg, opts, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace cogniopt::cli
