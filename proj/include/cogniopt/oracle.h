#pragma once
// Independent reference machinery: a sample-level Monte-Carlo energy detector,
// exhaustive dual/threshold grids and closed-form Rayleigh references.

#include <cstdint>
#include <span>
#include <vector>

#include "cogniopt/capacity.h"
#include "cogniopt/channel.h"
#include "cogniopt/optimizer.h"
#include "cogniopt/sensing.h"

namespace cogniopt::oracle {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t rng_seed = kDefaultSeed;
  std::int64_t batch = 0;  // samples per trial; 0 means N from SensingParams
  unsigned threads = 1;
};

enum class Hypothesis { idle, active };

struct McEstimate {
  double threshold = 0.0;
  double probability = 0.0;
  double std_error = 0.0;  // binomial standard error of `probability`
  std::uint64_t trials = 0;
  std::uint64_t exceedances = 0;
};

double binomial_stderr(double p, std::uint64_t trials);

/// Simulates the averaged energy of N circular complex Gaussian samples per
/// trial (noise of variance sigma^2; under `active` an independent Gaussian
/// signal of power gamma sigma^2 is added) and counts threshold exceedances.
/// All thresholds share the same trials. Deterministic for a given seed
/// regardless of the thread count.
std::vector<McEstimate> monte_carlo_detector(std::span<const double> etas, const SensingParams& sp,
                                             const McConfig& mc, Hypothesis hypothesis);

McEstimate monte_carlo_detector(double eta, const SensingParams& sp, const McConfig& mc,
                                Hypothesis hypothesis);

std::vector<double> log_space(double lower, double upper, int points);

/// Default multiplier grid: 100 log-spaced values over [1e-3, 1e2].
std::vector<double> default_lambda_grid();

struct DualGridMin {
  double lambda = 0.0;
  double value = 0.0;
  std::size_t index = 0;
  std::vector<double> lambdas;
  std::vector<double> values;

  /// True when the sampled values descend and then ascend with no further turn.
  bool unimodal(double slack = 1e-12) const;
};

DualGridMin brute_force_dual_min(double eta, const SensingParams& sp, const ChannelParams& ch,
                                 const ScenarioConfig& cfg, std::span<const double> lambda_grid);

struct SurfacePoint {
  double eta = 0.0;
  double lambda = 0.0;    // grid argmin of q at this eta
  double capacity = 0.0;  // min over the lambda grid of q, an upper bound on C_s*
  double pu_loss = 0.0;
  bool feasible = false;
};

/// Reference C_s(eta) surface from the (eta, lambda) grid. The ergodic moments
/// are computed once per lambda and reused across thresholds.
std::vector<SurfacePoint> brute_force_capacity_surface(std::span<const double> eta_grid,
                                                       const SensingParams& sp,
                                                       const ChannelParams& ch,
                                                       const ScenarioConfig& cfg,
                                                       std::span<const double> lambda_grid,
                                                       unsigned threads = 1);

/// Index of the feasible point with the largest capacity (first on ties), or
/// surface.size() when nothing is feasible.
std::size_t surface_argmax(const std::vector<SurfacePoint>& surface);

namespace reference {

/// Q(x) evaluated in 50-digit arithmetic.
double q_function_hp(double x);

/// E[(1/lambda - N0/g)^+] for g exponential with the given mean.
double rayleigh_waterfill_power(double lambda, double noise_power, double mean_snr = 1.0);

/// E[log2(g / (lambda N0)) ; g > lambda N0], the uncapped water-filling capacity.
double rayleigh_waterfill_capacity(double lambda, double noise_power, double mean_snr = 1.0);

/// E[log2(1 + g)] for g exponential.
double rayleigh_capacity_max(double mean_snr = 1.0);

/// E[log2(g)] for g exponential.
double rayleigh_capacity_max_literal(double mean_snr = 1.0);

/// int_0^x log2(1 + g) e^{-g/m} / m dg by composite Gauss-Legendre, independent
/// of the library quadrature.
double rayleigh_partial_capacity(double upper, double mean_snr = 1.0);

}  // namespace reference

}  // namespace cogniopt::oracle
