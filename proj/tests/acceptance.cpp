// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cogniopt/capacity.h"
#include "cogniopt/optimizer.h"
#include "cogniopt/oracle.h"
#include "cogniopt/sensing.h"

using namespace cogniopt;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Reference {
  SensingParams sp = SensingParams::from_samples(db_to_linear(-15.0), 12000, 1.0);
  ChannelParams ch;
  ScenarioConfig cfg;

  Reference() {
    cfg.prior_idle = 0.6;
    cfg.prior_active = 0.4;
    cfg.peak_interference = db_to_linear(0.0);
    cfg.avg_power_budget = db_to_linear(15.0);
  }
};

double detection_threshold(double pd, const SensingParams& sp) {
  const double scale = std::sqrt(static_cast<double>(sp.num_samples) / (2 * sp.sensed_snr + 1));
  return sp.noise_variance * (1 + sp.sensed_snr + q_function_inverse(pd) / scale);
}

Outcome roc_ordering() {
  const auto pf_grid = oracle::log_space(1e-3, 0.5, 400);
  int violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (std::int64_t n : {6000, 12000}) {
    const auto weak = SensingParams::from_samples(db_to_linear(-15.0), n);
    const auto strong = SensingParams::from_samples(db_to_linear(-12.0), n);
    for (double pf : pf_grid) {
      const double pm_weak = detector_point(threshold_for_false_alarm(pf, weak), weak).p_missed;
      const double pm_strong = detector_point(threshold_for_false_alarm(pf, strong), strong).p_missed;
      if (!(pm_strong < pm_weak)) ++violations;
      tightest = std::min(tightest, pm_weak - pm_strong);
    }
  }
  return {violations == 0, fmt("%d violations over 2x400 P_f points, min P_m gap %.3g", violations, tightest)};
}

Outcome monte_carlo_clt() {
  const auto sp = SensingParams::from_samples(db_to_linear(-15.0), 12000, 1.0);
  oracle::McConfig mc;
  mc.trials = 100000;
  mc.threads = worker_count();
  std::vector<double> eta_f;
  std::vector<double> eta_d;
  for (double p : {0.02, 0.1, 0.5, 0.9, 0.98}) {
    eta_f.push_back(threshold_for_false_alarm(p, sp));
    eta_d.push_back(detection_threshold(p, sp));
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
  return {worst <= 4.0, fmt("max deviation %.3f standard errors (limit 4), 1e5 trials x 5 thresholds x 2", worst)};
}

Outcome derivatives() {
  const auto sp = SensingParams::from_samples(db_to_linear(-15.0), 12000, 1.0);
  const double h = 1e-6 * sp.noise_variance;
  double worst = 0.0;
  for (double eta : linspace(0.9, 1.1, 201)) {
    // difference whichever side of each probability is the small tail
    const double fd_pf = false_alarm_argument(eta, sp) < 0.0
                             ? -(prob_no_false_alarm(eta + h, sp) - prob_no_false_alarm(eta - h, sp)) / (2 * h)
                             : (prob_false_alarm(eta + h, sp) - prob_false_alarm(eta - h, sp)) / (2 * h);
    const double fd_pd = detection_argument(eta, sp) < 0.0
                             ? -(prob_missed(eta + h, sp) - prob_missed(eta - h, sp)) / (2 * h)
                             : (prob_detection(eta + h, sp) - prob_detection(eta - h, sp)) / (2 * h);
    worst = std::max(worst, std::abs(std::abs(d_pf_deta(eta, sp)) - std::abs(fd_pf)) / std::abs(d_pf_deta(eta, sp)));
    worst = std::max(worst, std::abs(std::abs(d_pd_deta(eta, sp)) - std::abs(fd_pd)) / std::abs(d_pd_deta(eta, sp)));
  }
  return {worst <= 1e-6, fmt("max relative error %.3g over 201 thresholds in [0.9, 1.1]", worst)};
}

Outcome concavity() {
  Reference s;
  DualState ds;
  ds.tolerance = 1e-12;
  const auto regime = concave_regime(s.sp, 200);
  const auto grid = linspace(regime.lower, regime.upper, regime.grid_points);
  const auto rep = concavity_check(grid, s.sp, s.ch, s.cfg, ds, 1e-9, 1e-12, worker_count());
  const bool second_ok = rep.concave();
  const bool shape_ok = rep.first_difference_sign_changes == 1;
  return {second_ok && shape_ok,
          fmt("max second difference %.3g on eta in [%.6g, %.6g] (%s); first-difference sign changes %d, "
              "expected 1 (%s)",
              rep.max_second_difference, regime.lower, regime.upper, second_ok ? "ok" : "violated",
              rep.first_difference_sign_changes, shape_ok ? "ok" : "violated")};
}

Outcome duality() {
  Reference s;
  double worst_gap = 0.0;
  double worst_kkt = 0.0;
  bool gap_ok = true;
  bool kkt_ok = true;
  bool converged = true;
  for (double eta : {0.95, 1.0, 1.02, 1.05, 1.1}) {
    const auto r = subgradient_solve(eta, s.sp, s.ch, s.cfg, DualState{});
    converged = converged && r.converged;
    const double gap = std::abs(r.capacity - r.dual_value);
    const double kkt = std::abs(r.lambda_star * (r.avg_power_used - s.cfg.avg_power_budget));
    gap_ok = gap_ok && gap <= std::max(1e-3 * r.capacity, 1e-6);
    kkt_ok = kkt_ok && kkt <= 1e-3 * s.cfg.avg_power_budget;
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kkt);
  }
  std::mt19937_64 rng(oracle::kDefaultSeed);
  std::uniform_real_distribution<double> log_lam(std::log(1e-3), std::log(1e2));
  double worst_ineq = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double lam = std::exp(log_lam(rng));
    const double mu = std::exp(log_lam(rng));
    const auto a = dual_function(lam, 1.02, s.sp, s.ch, s.cfg);
    const auto b = dual_function(mu, 1.02, s.sp, s.ch, s.cfg);
    worst_ineq = std::max(worst_ineq, a.value + a.subgradient * (mu - lam) / std::numbers::ln2 - b.value);
  }
  const bool ineq_ok = worst_ineq <= 1e-9;
  return {converged && gap_ok && kkt_ok && ineq_ok,
          fmt("max |gap| %.3g, max |lambda (H - P_av)| %.3g, max subgradient-inequality violation %.3g", worst_gap,
              worst_kkt, worst_ineq)};
}

Outcome oracle_equivalence() {
  Reference s;
  s.cfg.loss_fraction = 0.05;
  const EtaRange range{0.9, 1.1, 41};
  const auto eta_grid = linspace(range.lower, range.upper, 50);
  const auto surface = oracle::brute_force_capacity_surface(eta_grid, s.sp, s.ch, s.cfg,
                                                            oracle::default_lambda_grid(), worker_count());
  const auto best = oracle::surface_argmax(surface);
  const auto search = threshold_search(s.sp, s.ch, s.cfg, range, DualState{}, worker_count());
  if (best == surface.size() || !search.feasible) {
    const bool agree = (best == surface.size()) == !search.feasible;
    return {agree, "both routes report infeasible: " + std::string(agree ? "yes" : "no")};
  }
  const double cell = eta_grid[1] - eta_grid[0];
  const double cells = std::abs(search.best.eta_star - surface[best].eta) / cell;
  return {cells <= 1.0, fmt("search eta* %.6g vs surface argmax %.6g: %.3g cells (q = 0.05, 50x100 grid)",
                            search.best.eta_star, surface[best].eta, cells)};
}

Outcome degenerate_budget() {
  Reference s;
  s.cfg.avg_power_budget = 0.5 * s.cfg.peak_interference / s.ch.gain_sp;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  const auto grid = linspace(0.9, 1.1, 41);
  for (double eta : grid) {
    const double c = subgradient_solve(eta, s.sp, s.ch, s.cfg, DualState{}).capacity;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    sum += c;
  }
  const double mean = sum / static_cast<double>(grid.size());
  const double variation = (hi - lo) / mean;
  return {variation < 1e-3, fmt("(max - min) / mean of C_s* over eta in [0.9, 1.1] = %.4g (limit 1e-3), P_av = %g",
                                variation, s.cfg.avg_power_budget)};
}

Outcome pu_loss_shape() {
  Reference s;
  const auto grid = linspace(0.9, 1.1, 201);
  std::string detail;
  bool ok = true;
  for (auto law : {CapacityLaw::shannon_1plus, CapacityLaw::paper_literal}) {
    ScenarioConfig cfg = s.cfg;
    cfg.capacity_law = law;
    const double cp_max = pu_capacity_max(s.ch, cfg);
    int decreases = 0;
    double prev = -std::numeric_limits<double>::infinity();
    for (double eta : grid) {
      const double loss = pu_loss_or_limit(eta, s.sp, s.ch, cfg, cp_max);
      if (loss < prev) ++decreases;
      prev = loss;
    }
    ok = ok && decreases == 0;
    detail += fmt("%s law: %d decreasing steps; ", law == CapacityLaw::shannon_1plus ? "shannon" : "paper",
                  decreases);
  }
  // P_d -> 1
  const double near_one = pu_capacity_loss(detection_threshold(1.0 - 1e-9, s.sp), s.sp, s.ch, s.cfg).capacity_loss;
  const bool vanishes = near_one < 1e-8;
  detail += fmt("loss at P_d = 1 - 1e-9: %.3g; ", near_one);
  ScenarioConfig cfg = s.cfg;
  cfg.loss_fraction = 0.05;
  const auto search = threshold_search(s.sp, s.ch, cfg, EtaRange{0.9, 1.1, 41}, DualState{}, worker_count());
  const bool budget_ok = search.feasible || !search.binding_constraint.empty();
  detail += search.feasible ? fmt("q = 0.05 feasible up to eta = %.6g", search.feasible_upper)
                            : "q = 0.05 infeasible: " + search.binding_constraint;
  return {ok && vanishes && budget_ok, detail};
}

Outcome closed_forms() {
  ChannelParams ch;
  ScenarioConfig cfg;
  cfg.peak_interference = 1e12;
  const double e0 = ergodic_moments(power_policy(1.0, ch, cfg), ch).mean_idle_power;
  const double cp = pu_capacity_max(ch, cfg);
  const double ref_e0 = std::exp(-1.0) - 0.219383934395520274;
  const double ref_cp = std::numbers::e * 0.219383934395520274 / std::numbers::ln2;
  const double err_e0 = std::abs(e0 - ref_e0);
  const double err_cp = std::abs(cp - ref_cp);
  return {err_e0 <= 1e-6 && err_cp <= 1e-6,
          fmt("E(P^0) = %.9f (|err| %.2g), C_p_max = %.9f (|err| %.2g)", e0, err_e0, cp, err_cp)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "ROC ordering", 1.0, roc_ordering},
      {2, "Monte-Carlo detector", 60.0, monte_carlo_clt},
      {3, "derivative check", 1.0, derivatives},
      {4, "concavity", 300.0, concavity},
      {5, "duality gap and KKT", 60.0, duality},
      {6, "oracle equivalence", 600.0, oracle_equivalence},
      {7, "degenerate budget", std::numeric_limits<double>::infinity(), degenerate_budget},
      {8, "PU loss monotone", std::numeric_limits<double>::infinity(), pu_loss_shape},
      {9, "closed-form spot values", std::numeric_limits<double>::infinity(), closed_forms},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit_s;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s%s]\n", passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
