#pragma once
// Dual decomposition of the joint power / sensing-threshold program.
//
// For a fixed threshold the average-power constraint is dualized with multiplier
// lambda (price per nat), which makes the per-state maximizer the water-filling
// level 1/lambda, capped by I_pk / G_sp in the busy state. The dual value is
// reported in bits:
//
//   q(lambda) = C_s(P_lambda) - lambda * (H(P_lambda) - P_av) / ln 2
//
// so the subgradient P_av - H of the iteration is ln 2 times an element of dq.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogniopt/capacity.h"
#include "cogniopt/channel.h"
#include "cogniopt/sensing.h"

namespace cogniopt {

/// Smallest multiplier the projection allows; a solution sitting here means the
/// power budget is slack.
inline constexpr double kLambdaFloor = 1e-12;

enum class StepRule {
  constant,    // alpha, halved each time the subgradient changes sign
  diminishing  // alpha / sqrt(k)
};

struct DualState {
  double lambda = 1.0;
  double subgrad = 0.0;
  std::int64_t iteration = 0;
  double step_size = 0.05;
  double tolerance = 1e-6;
  std::int64_t max_iterations = 10000;
  StepRule step_rule = StepRule::constant;

  void validate() const;
};

/// Busy-state power ceiling I_pk / G_sp.
double power_cap(const ChannelParams& ch, const ScenarioConfig& cfg);

/// (P^0, P^1) at one SU fading state. Throws std::domain_error for lambda <= 0.
std::pair<double, double> power_allocation(double lambda, double gamma_s, const ChannelParams& ch,
                                           const ScenarioConfig& cfg);

/// The maximizing policy of the Lagrangian for a given multiplier.
PowerPolicy power_policy(double lambda, const ChannelParams& ch, const ScenarioConfig& cfg);

struct DualEvaluation {
  double lambda = 0.0;
  double value = 0.0;        // q(lambda), bits/s/Hz
  double capacity = 0.0;     // C_s at the maximizing policy
  double avg_power = 0.0;    // H at the maximizing policy
  double subgradient = 0.0;  // P_av - H
  ErgodicMoments moments;
  SensingWeights weights;
};

/// Combines precomputed moments with sensing weights. The moments only depend on
/// lambda, so sweeps over eta can reuse them.
DualEvaluation evaluate_dual(double lambda, const ErgodicMoments& moments,
                             const SensingWeights& weights, const ScenarioConfig& cfg);

DualEvaluation dual_function(double lambda, double eta, const SensingParams& sp,
                             const ChannelParams& ch, const ScenarioConfig& cfg);

/// P_av - H(policy).
double subgradient(const PowerPolicy& policy, double eta, const SensingParams& sp,
                   const ChannelParams& ch, const ScenarioConfig& cfg);

struct IterationRecord {
  double lambda = 0.0;
  double subgradient = 0.0;
  double dual_value = 0.0;
};

struct OptimizationResult {
  double eta_star = 0.0;
  double lambda_star = 0.0;
  double cutoff_snr = 0.0;  // gamma_s* = lambda* N0, below which the SU stays silent
  double capacity = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;  // capacity - dual_value
  double avg_power_used = 0.0;
  double interference_used = 0.0;  // expectation over fading
  double interference_peak = 0.0;  // worst fading state
  double pu_loss = 0.0;
  ErgodicMoments moments;
  bool converged = false;
  bool at_lower_bound = false;  // budget slack, lambda pinned at kLambdaFloor
  std::int64_t iterations = 0;
  std::vector<IterationRecord> trace;
};

/// Projected subgradient iteration on lambda for a fixed threshold. Iterates
/// lambda <- max(floor, lambda - alpha g) and stops when |g| <= tol * P_av or the
/// multiplier moves less than tol relative. Steps that would leave the current
/// sign bracket of g are replaced by bisection. Reaching max_iterations returns
/// with converged = false.
OptimizationResult subgradient_solve(double eta, const SensingParams& sp, const ChannelParams& ch,
                                     const ScenarioConfig& cfg, const DualState& ds0);

struct EtaRange {
  double lower = 0.0;
  double upper = 0.0;
  int grid_points = 41;
};

struct SweepRow {
  double eta = 0.0;
  double lambda_star = 0.0;
  double capacity = 0.0;
  double avg_power = 0.0;
  double interference = 0.0;
  double pu_loss = 0.0;
  double duality_gap = 0.0;
  std::int64_t iterations = 0;
  bool feasible = false;
  bool converged = false;
};

struct ThresholdSearchResult {
  bool feasible = false;
  std::string binding_constraint;  // set when infeasible
  double loss_budget = 0.0;        // q * C_p_max
  double capacity_max_pu = 0.0;    // C_p_max
  double feasible_upper = std::numeric_limits<double>::quiet_NaN();  // largest feasible eta found
  OptimizationResult best;
  std::vector<SweepRow> sweep;
};

/// PU loss used for feasibility; the limit C_p_max where the outage rounds to 1.
double pu_loss_or_limit(double eta, const SensingParams& sp, const ChannelParams& ch,
                        const ScenarioConfig& cfg, double capacity_max_pu);

/// Outer search over the sensing threshold: coarse grid, feasibility filtering by
/// the PU loss budget, then golden-section refinement around the best feasible
/// grid point. Grid points are solved on up to `threads` workers.
ThresholdSearchResult threshold_search(const SensingParams& sp, const ChannelParams& ch,
                                       const ScenarioConfig& cfg, const EtaRange& range,
                                       const DualState& ds0, unsigned threads = 1);

/// Thresholds at or above sigma^2 (1 + gamma), where both detector probabilities
/// are convex in eta, out to where they have decayed below ~1e-15.
EtaRange concave_regime(const SensingParams& sp, int grid_points);

std::vector<double> linspace(double lower, double upper, int points);

struct ConcavityPoint {
  double eta = 0.0;
  double capacity = 0.0;
  double idle_capacity = 0.0;
  double active_capacity = 0.0;
  double d_pf = 0.0;
  double d_pd = 0.0;
  /// dC_s/deta with C_0, C_1 frozen: pi0 P_f' (C1 - C0) + pi1 P_d' (C1 - C0)
  double fixed_policy_slope = 0.0;
};

struct ConcavityReport {
  std::vector<ConcavityPoint> points;
  std::vector<double> first_differences;
  std::vector<double> second_differences;
  std::vector<std::size_t> violations;  // interior indices with second difference > tolerance
  double max_second_difference = -std::numeric_limits<double>::infinity();
  int first_difference_sign_changes = 0;
  double tolerance = 1e-9;

  bool concave() const { return violations.empty(); }
};

/// Second central differences of the optimized C_s(eta) on the grid and the
/// factors of its fixed-policy derivative. First differences smaller than
/// `flat_tolerance` are ignored when counting sign changes.
ConcavityReport concavity_check(std::span<const double> eta_grid, const SensingParams& sp,
                                const ChannelParams& ch, const ScenarioConfig& cfg,
                                const DualState& ds0, double tolerance = 1e-9,
                                double flat_tolerance = 1e-12, unsigned threads = 1);

}  // namespace cogniopt
