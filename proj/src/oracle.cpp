#include "cogniopt/oracle.h"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "parallel.h"

namespace cogniopt::oracle {

namespace {

constexpr std::uint64_t kTrialsPerBatch = 1024;
// 16 uniforms in (0, 1) multiply to at least 2^-864, well above the double range floor.
constexpr int kUniformsPerLog = 16;

double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Sum of `count` unit-mean exponentials, i.e. -log of a product of uniforms.
double exponential_sum(std::mt19937_64& rng, std::int64_t count) {
  double total = 0.0;
  while (count > 0) {
    const int chunk = static_cast<int>(std::min<std::int64_t>(count, kUniformsPerLog));
    double prod = 1.0;
    for (int i = 0; i < chunk; ++i) prod *= open_uniform(rng);
    total -= std::log(prod);
    count -= chunk;
  }
  return total;
}

}  // namespace

double binomial_stderr(double p, std::uint64_t trials) {
  if (trials == 0) throw std::domain_error("binomial_stderr: zero trials");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::vector<McEstimate> monte_carlo_detector(std::span<const double> etas, const SensingParams& sp,
                                             const McConfig& mc, Hypothesis hypothesis) {
  if (mc.trials == 0) throw std::domain_error("monte_carlo_detector: zero trials");
  sp.validate();
  for (double eta : etas) {
    if (!(eta >= 0.0)) throw std::domain_error("monte_carlo_detector: thresholds must be >= 0");
  }
  const std::int64_t samples = mc.batch > 0 ? mc.batch : sp.num_samples;
  // |x|^2 of a circular complex Gaussian is exponential with mean equal to its variance.
  const double per_sample_mean =
      sp.noise_variance * (hypothesis == Hypothesis::active ? 1.0 + sp.sensed_snr : 1.0);
  const double scale = per_sample_mean / static_cast<double>(samples);

  const std::uint64_t batches = (mc.trials + kTrialsPerBatch - 1) / kTrialsPerBatch;
  std::vector<std::vector<std::uint64_t>> counts(batches, std::vector<std::uint64_t>(etas.size(), 0));

  detail::parallel_for(batches, mc.threads, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(mc.rng_seed), static_cast<std::uint32_t>(mc.rng_seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(hypothesis)};
    std::mt19937_64 rng(seq);
    const std::uint64_t first = b * kTrialsPerBatch;
    const std::uint64_t last = std::min(mc.trials, first + kTrialsPerBatch);
    auto& local = counts[b];
    for (std::uint64_t t = first; t < last; ++t) {
      const double statistic = scale * exponential_sum(rng, samples);
      for (std::size_t j = 0; j < etas.size(); ++j) {
        if (statistic > etas[j]) ++local[j];
      }
    }
  });

  std::vector<McEstimate> out(etas.size());
  for (std::size_t j = 0; j < etas.size(); ++j) {
    std::uint64_t hits = 0;
    for (const auto& c : counts) hits += c[j];
    auto& e = out[j];
    e.threshold = etas[j];
    e.trials = mc.trials;
    e.exceedances = hits;
    e.probability = static_cast<double>(hits) / static_cast<double>(mc.trials);
    e.std_error = binomial_stderr(e.probability, mc.trials);
  }
  return out;
}

McEstimate monte_carlo_detector(double eta, const SensingParams& sp, const McConfig& mc,
                                Hypothesis hypothesis) {
  const double etas[] = {eta};
  return monte_carlo_detector(etas, sp, mc, hypothesis).front();
}

std::vector<double> log_space(double lower, double upper, int points) {
  if (!(lower > 0.0) || !(upper >= lower) || points < 2) {
    throw std::invalid_argument("log_space: need 0 < lower <= upper and >= 2 points");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(lower);
  const double step = (std::log(upper) - a) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + step * i);
  out.front() = lower;
  out.back() = upper;
  return out;
}

std::vector<double> default_lambda_grid() { return log_space(1e-3, 1e2, 100); }

bool DualGridMin::unimodal(double slack) const {
  bool ascending = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (d > slack) ascending = true;
    if (ascending && d < -slack) return false;
  }
  return true;
}

DualGridMin brute_force_dual_min(double eta, const SensingParams& sp, const ChannelParams& ch,
                                 const ScenarioConfig& cfg, std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) throw std::invalid_argument("brute_force_dual_min: empty grid");
  DualGridMin out;
  out.lambdas.assign(lambda_grid.begin(), lambda_grid.end());
  out.values.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    out.values.push_back(dual_function(lambda, eta, sp, ch, cfg).value);
  }
  const auto it = std::min_element(out.values.begin(), out.values.end());
  out.index = static_cast<std::size_t>(it - out.values.begin());
  out.lambda = out.lambdas[out.index];
  out.value = *it;
  return out;
}

std::vector<SurfacePoint> brute_force_capacity_surface(std::span<const double> eta_grid,
                                                       const SensingParams& sp,
                                                       const ChannelParams& ch,
                                                       const ScenarioConfig& cfg,
                                                       std::span<const double> lambda_grid,
                                                       unsigned threads) {
  if (lambda_grid.empty()) throw std::invalid_argument("brute_force_capacity_surface: empty lambda grid");
  std::vector<ErgodicMoments> moments(lambda_grid.size());
  detail::parallel_for(lambda_grid.size(), threads, [&](std::size_t j) {
    moments[j] = ergodic_moments(power_policy(lambda_grid[j], ch, cfg), ch);
  });

  const double cp_max = pu_capacity_max(ch, cfg);
  const double budget = cfg.loss_fraction * cp_max;
  std::vector<SurfacePoint> out(eta_grid.size());
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    const auto w = sensing_weights(eta_grid[i], sp, cfg);
    auto& pt = out[i];
    pt.eta = eta_grid[i];
    pt.capacity = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
      const double q = evaluate_dual(lambda_grid[j], moments[j], w, cfg).value;
      if (q < pt.capacity) {
        pt.capacity = q;
        pt.lambda = lambda_grid[j];
      }
    }
    pt.pu_loss = pu_loss_or_limit(pt.eta, sp, ch, cfg, cp_max);
    pt.feasible = cfg.loss_fraction >= 1.0 || pt.pu_loss <= budget;
  }
  return out;
}

std::size_t surface_argmax(const std::vector<SurfacePoint>& surface) {
  std::size_t best = surface.size();
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (!surface[i].feasible) continue;
    if (best == surface.size() || surface[i].capacity > surface[best].capacity) best = i;
  }
  return best;
}

namespace reference {

double q_function_hp(double x) {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 arg = cpp_bin_float_50(x) / boost::math::constants::root_two<cpp_bin_float_50>();
  return static_cast<double>(boost::math::erfc(arg) / 2);
}

double rayleigh_waterfill_power(double lambda, double noise_power, double mean_snr) {
  const double c = lambda * noise_power / mean_snr;
  return std::exp(-c) / lambda - (noise_power / mean_snr) * boost::math::expint(1, c);
}

double rayleigh_waterfill_capacity(double lambda, double noise_power, double mean_snr) {
  return boost::math::expint(1, lambda * noise_power / mean_snr) / std::numbers::ln2;
}

double rayleigh_capacity_max(double mean_snr) {
  const double c = 1.0 / mean_snr;
  return std::exp(c) * boost::math::expint(1, c) / std::numbers::ln2;
}

double rayleigh_capacity_max_literal(double mean_snr) {
  return (std::log(mean_snr) - std::numbers::egamma) / std::numbers::ln2;
}

double rayleigh_partial_capacity(double upper, double mean_snr) {
  constexpr int kPanels = 64;
  const double h = upper / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double a = i * h;
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [mean_snr](double g) { return std::log2(1.0 + g) * std::exp(-g / mean_snr) / mean_snr; },
        a, a + h);
  }
  return total;
}

}  // namespace reference

}  // namespace cogniopt::oracle
