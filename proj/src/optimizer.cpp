#include "cogniopt/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cogniopt/golden_section.h"
#include "parallel.h"

namespace cogniopt {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void validate_inputs(double eta, const SensingParams& sp, const ChannelParams& ch,
                     const ScenarioConfig& cfg) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::domain_error("sensing threshold must be finite and >= 0");
  }
  sp.validate();
  ch.validate();
  cfg.validate();
}

DualEvaluation evaluate_at(double lambda, const SensingWeights& w, const ChannelParams& ch,
                           const ScenarioConfig& cfg) {
  const auto moments = ergodic_moments(power_policy(lambda, ch, cfg), ch);
  return evaluate_dual(lambda, moments, w, cfg);
}

}  // namespace

void DualState::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("initial lambda must be finite and >= 0");
  }
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

double power_cap(const ChannelParams& ch, const ScenarioConfig& cfg) {
  return cfg.peak_interference / ch.gain_sp;
}

std::pair<double, double> power_allocation(double lambda, double gamma_s, const ChannelParams& ch,
                                           const ScenarioConfig& cfg) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("power_allocation: lambda must be > 0 (water level is unbounded)");
  }
  if (gamma_s <= lambda * ch.noise_power) {
    return {0.0, 0.0};
  }
  const double idle = 1.0 / lambda - ch.noise_power / gamma_s;
  return {idle, std::min(idle, power_cap(ch, cfg))};
}

PowerPolicy power_policy(double lambda, const ChannelParams& ch, const ScenarioConfig& cfg) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("power_policy: lambda must be > 0 (water level is unbounded)");
  }
  const double n0 = ch.noise_power;
  const double level = 1.0 / lambda;
  const double cap = power_cap(ch, cfg);

  PowerPolicy p;
  p.dual_lambda = lambda;
  p.idle_power = [=](double g) { return g > lambda * n0 ? level - n0 / g : 0.0; };
  p.active_power = [=](double g) { return g > lambda * n0 ? std::min(level - n0 / g, cap) : 0.0; };
  p.breakpoints.push_back(lambda * n0);
  if (level > cap) {
    p.breakpoints.push_back(n0 / (level - cap));
  }
  return p;
}

DualEvaluation evaluate_dual(double lambda, const ErgodicMoments& moments,
                             const SensingWeights& weights, const ScenarioConfig& cfg) {
  DualEvaluation e;
  e.lambda = lambda;
  e.moments = moments;
  e.weights = weights;
  e.capacity = weights.mix(moments.idle_capacity, moments.active_capacity);
  e.avg_power = weights.mix(moments.mean_idle_power, moments.mean_active_power);
  e.subgradient = cfg.avg_power_budget - e.avg_power;
  e.value = e.capacity + lambda * e.subgradient / kLn2;
  return e;
}

DualEvaluation dual_function(double lambda, double eta, const SensingParams& sp,
                             const ChannelParams& ch, const ScenarioConfig& cfg) {
  validate_inputs(eta, sp, ch, cfg);
  return evaluate_at(lambda, sensing_weights(eta, sp, cfg), ch, cfg);
}

double subgradient(const PowerPolicy& policy, double eta, const SensingParams& sp,
                   const ChannelParams& ch, const ScenarioConfig& cfg) {
  return cfg.avg_power_budget - avg_power(policy, eta, sp, cfg, ch);
}

OptimizationResult subgradient_solve(double eta, const SensingParams& sp, const ChannelParams& ch,
                                     const ScenarioConfig& cfg, const DualState& ds0) {
  validate_inputs(eta, sp, ch, cfg);
  ds0.validate();

  const auto weights = sensing_weights(eta, sp, cfg);
  const double budget = cfg.avg_power_budget;

  OptimizationResult r;
  r.eta_star = eta;

  // Sign bracket: g < 0 at lo (over budget), g > 0 at hi (under budget).
  double lo = kLambdaFloor;
  double hi = std::numeric_limits<double>::infinity();
  double alpha = ds0.step_size;
  double prev_g = 0.0;
  double lambda = std::max(ds0.lambda, kLambdaFloor);
  DualEvaluation e;

  for (std::int64_t k = 1; k <= ds0.max_iterations; ++k) {
    e = evaluate_at(lambda, weights, ch, cfg);
    const double g = e.subgradient;
    r.trace.push_back({lambda, g, e.value});
    r.iterations = k;

    if (g > 0.0) hi = std::min(hi, lambda);
    if (g < 0.0) lo = std::max(lo, lambda);

    if (std::abs(g) <= ds0.tolerance * budget) {
      r.converged = true;
      break;
    }
    if (g > 0.0 && lambda <= kLambdaFloor) {
      r.converged = true;
      r.at_lower_bound = true;
      break;
    }
    if (std::isfinite(hi) && hi - lo <= ds0.tolerance * hi) {
      r.converged = true;
      break;
    }

    double step = alpha;
    if (ds0.step_rule == StepRule::diminishing) {
      step = ds0.step_size / std::sqrt(static_cast<double>(k));
    } else if (prev_g * g < 0.0) {
      alpha *= 0.5;
      step = alpha;
    }
    prev_g = g;

    double next = std::max(kLambdaFloor, lambda - step * g);
    if (next <= lo || next >= hi) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lambda;
    }
    if (std::abs(next - lambda) <= ds0.tolerance * lambda) {
      lambda = next;
      e = evaluate_at(lambda, weights, ch, cfg);
      r.trace.push_back({lambda, e.subgradient, e.value});
      r.converged = true;
      break;
    }
    lambda = next;
  }

  if (e.subgradient > ds0.tolerance * budget && e.lambda <= 2.0 * kLambdaFloor) {
    r.at_lower_bound = true;
  }

  const double level_state = ch.su_fading.truncation_point();
  const auto policy = power_policy(e.lambda, ch, cfg);

  r.lambda_star = e.lambda;
  r.cutoff_snr = e.lambda * ch.noise_power;
  r.capacity = e.capacity;
  r.dual_value = e.value;
  r.duality_gap = e.capacity - e.value;
  r.avg_power_used = e.avg_power;
  r.moments = e.moments;
  // Interference expectation equals G_sp H with the detection/busy-power pairing.
  r.interference_used = ch.gain_sp * e.avg_power;
  r.interference_peak = interference_at(policy, level_state, weights, ch);
  return r;
}

double pu_loss_or_limit(double eta, const SensingParams& sp, const ChannelParams& ch,
                        const ScenarioConfig& cfg, double capacity_max_pu) {
  try {
    return pu_capacity_loss(eta, sp, ch, cfg).capacity_loss;
  } catch (const std::domain_error&) {
    return capacity_max_pu;
  }
}

std::vector<double> linspace(double lower, double upper, int points) {
  if (points < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = lower;
    return out;
  }
  const double step = (upper - lower) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lower + step * i;
  out.back() = upper;
  return out;
}

ThresholdSearchResult threshold_search(const SensingParams& sp, const ChannelParams& ch,
                                       const ScenarioConfig& cfg, const EtaRange& range,
                                       const DualState& ds0, unsigned threads) {
  if (!(range.lower >= 0.0) || !(range.upper >= range.lower) || !std::isfinite(range.upper) ||
      range.grid_points < 1) {
    throw std::domain_error("threshold_search: need 0 <= lower <= upper and grid_points >= 1");
  }
  validate_inputs(range.lower, sp, ch, cfg);
  ds0.validate();

  ThresholdSearchResult out;
  out.capacity_max_pu = pu_capacity_max(ch, cfg);
  out.loss_budget = cfg.loss_fraction * out.capacity_max_pu;
  const bool vacuous = cfg.loss_fraction >= 1.0;

  auto is_feasible = [&](double loss) { return vacuous || loss <= out.loss_budget; };

  const auto grid = linspace(range.lower, range.upper, range.grid_points);
  std::vector<OptimizationResult> solved(grid.size());
  out.sweep.resize(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    auto res = subgradient_solve(grid[i], sp, ch, cfg, ds0);
    res.pu_loss = pu_loss_or_limit(grid[i], sp, ch, cfg, out.capacity_max_pu);
    SweepRow row;
    row.eta = grid[i];
    row.lambda_star = res.lambda_star;
    row.capacity = res.capacity;
    row.avg_power = res.avg_power_used;
    row.interference = res.interference_used;
    row.pu_loss = res.pu_loss;
    row.duality_gap = res.duality_gap;
    row.iterations = res.iterations;
    row.feasible = is_feasible(res.pu_loss);
    row.converged = res.converged;
    out.sweep[i] = row;
    solved[i] = std::move(res);
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!out.sweep[i].feasible) continue;
    if (!best || out.sweep[i].capacity > out.sweep[*best].capacity) best = i;
  }
  if (!best) {
    double min_loss = std::numeric_limits<double>::infinity();
    for (const auto& row : out.sweep) min_loss = std::min(min_loss, row.pu_loss);
    std::ostringstream msg;
    msg << "pu_capacity_loss <= q * C_p_max: budget " << out.loss_budget << " (q=" << cfg.loss_fraction
        << ") is below the smallest loss on the grid " << min_loss;
    out.binding_constraint = msg.str();
    return out;
  }
  out.feasible = true;

  // Loss is non-decreasing in eta, so the feasible set is an interval; find its
  // right edge when the grid crosses it.
  const std::size_t i = *best;
  double right = grid[std::min(i + 1, grid.size() - 1)];
  out.feasible_upper = grid[i];
  for (std::size_t j = i; j < grid.size() && out.sweep[j].feasible; ++j) out.feasible_upper = grid[j];
  const double eta_tol = 1e-4 * sp.noise_variance;
  if (i + 1 < grid.size() && !out.sweep[i + 1].feasible) {
    double a = grid[i];
    double b = grid[i + 1];
    while (b - a > 1e-2 * eta_tol) {
      const double mid = 0.5 * (a + b);
      (is_feasible(pu_loss_or_limit(mid, sp, ch, cfg, out.capacity_max_pu)) ? a : b) = mid;
    }
    right = a;
    out.feasible_upper = a;
  }
  const double left = grid[i > 0 ? i - 1 : 0];

  OptimizationResult chosen = solved[i];
  if (right - left > eta_tol) {
    const auto refined = golden_section_maximize(
        [&](double eta) { return subgradient_solve(eta, sp, ch, cfg, ds0).capacity; }, left, right,
        eta_tol);
    if (refined.value > chosen.capacity) {
      chosen = subgradient_solve(refined.x, sp, ch, cfg, ds0);
      chosen.pu_loss = pu_loss_or_limit(refined.x, sp, ch, cfg, out.capacity_max_pu);
    }
  }
  out.best = std::move(chosen);
  return out;
}

EtaRange concave_regime(const SensingParams& sp, int grid_points) {
  sp.validate();
  const double spread = 8.0 * sp.noise_variance *
                        std::sqrt((2.0 * sp.sensed_snr + 1.0) / static_cast<double>(sp.num_samples));
  const double lower = sp.noise_variance * (1.0 + sp.sensed_snr);
  return {lower, lower + spread, grid_points};
}

ConcavityReport concavity_check(std::span<const double> eta_grid, const SensingParams& sp,
                                const ChannelParams& ch, const ScenarioConfig& cfg,
                                const DualState& ds0, double tolerance, double flat_tolerance,
                                unsigned threads) {
  if (eta_grid.size() < 3) {
    throw std::invalid_argument("concavity_check: need at least 3 grid points");
  }
  ConcavityReport rep;
  rep.tolerance = tolerance;
  rep.points.resize(eta_grid.size());
  detail::parallel_for(eta_grid.size(), threads, [&](std::size_t i) {
    const double eta = eta_grid[i];
    const auto res = subgradient_solve(eta, sp, ch, cfg, ds0);
    ConcavityPoint& pt = rep.points[i];
    pt.eta = eta;
    pt.capacity = res.capacity;
    pt.idle_capacity = res.moments.idle_capacity;
    pt.active_capacity = res.moments.active_capacity;
    pt.d_pf = d_pf_deta(eta, sp);
    pt.d_pd = d_pd_deta(eta, sp);
    const double diff = pt.active_capacity - pt.idle_capacity;
    pt.fixed_policy_slope = cfg.prior_idle * pt.d_pf * diff + cfg.prior_active * pt.d_pd * diff;
  });

  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
    rep.first_differences.push_back(rep.points[i + 1].capacity - rep.points[i].capacity);
  }
  for (std::size_t i = 1; i + 1 < rep.points.size(); ++i) {
    const double d2 =
        rep.points[i + 1].capacity - 2.0 * rep.points[i].capacity + rep.points[i - 1].capacity;
    rep.second_differences.push_back(d2);
    rep.max_second_difference = std::max(rep.max_second_difference, d2);
    if (d2 > tolerance) rep.violations.push_back(i);
  }
  int last_sign = 0;
  for (double d : rep.first_differences) {
    if (std::abs(d) <= flat_tolerance) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++rep.first_difference_sign_changes;
    last_sign = s;
  }
  return rep;
}

}  // namespace cogniopt
