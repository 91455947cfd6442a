#include "cogniopt/capacity.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cogniopt {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void ScenarioConfig::validate() const {
  if (!is_probability(prior_idle) || !is_probability(prior_active) ||
      std::abs(prior_idle + prior_active - 1.0) > 1e-12) {
    throw std::invalid_argument("prior_idle and prior_active must be probabilities summing to 1");
  }
  if (!(avg_power_budget > 0.0) || !std::isfinite(avg_power_budget)) {
    throw std::invalid_argument("avg_power_budget must be finite and > 0");
  }
  if (!(peak_interference > 0.0) || !std::isfinite(peak_interference)) {
    throw std::invalid_argument("peak_interference must be finite and > 0");
  }
  if (!is_probability(loss_fraction)) {
    throw std::invalid_argument("loss_fraction must lie in [0, 1]");
  }
}

PowerPolicy constant_policy(double idle_power, double active_power) {
  PowerPolicy p;
  p.idle_power = [idle_power](double) { return idle_power; };
  p.active_power = [active_power](double) { return active_power; };
  return p;
}

SensingWeights sensing_weights(double eta, const SensingParams& sp, const ScenarioConfig& cfg) {
  SensingWeights w;
  w.idle_clear = cfg.prior_idle * prob_no_false_alarm(eta, sp);
  w.idle_false_alarm = cfg.prior_idle * prob_false_alarm(eta, sp);
  w.active_detected = cfg.prior_active * prob_detection(eta, sp);
  w.active_missed = cfg.prior_active * prob_missed(eta, sp);
  return w;
}

double instantaneous_capacity(double power, double gamma_s, double noise_power) {
  if (power <= 0.0) return 0.0;
  return std::log2(1.0 + gamma_s * power / noise_power);
}

ErgodicMoments ergodic_moments(const PowerPolicy& policy, const ChannelParams& ch) {
  const auto& m = ch.su_fading;
  const auto& bp = policy.breakpoints;
  const double n0 = ch.noise_power;
  ErgodicMoments out;
  out.mean_idle_power = expect(m, policy.idle_power, bp);
  out.mean_active_power = expect(m, policy.active_power, bp);
  out.idle_capacity = expect(
      m, [&](double g) { return instantaneous_capacity(policy.idle_power(g), g, n0); }, bp);
  out.active_capacity = expect(
      m, [&](double g) { return instantaneous_capacity(policy.active_power(g), g, n0); }, bp);
  return out;
}

std::pair<double, double> ergodic_capacity_pair(const PowerPolicy& policy,
                                                const ChannelParams& ch) {
  const auto& m = ch.su_fading;
  const auto& bp = policy.breakpoints;
  const double n0 = ch.noise_power;
  const double c0 = expect(
      m, [&](double g) { return instantaneous_capacity(policy.idle_power(g), g, n0); }, bp);
  const double c1 = expect(
      m, [&](double g) { return instantaneous_capacity(policy.active_power(g), g, n0); }, bp);
  return {c0, c1};
}

double su_capacity(double idle_capacity, double active_capacity, double eta,
                   const SensingParams& sp, const ScenarioConfig& cfg) {
  return sensing_weights(eta, sp, cfg).mix(idle_capacity, active_capacity);
}

double avg_power(const PowerPolicy& policy, double eta, const SensingParams& sp,
                 const ScenarioConfig& cfg, const ChannelParams& ch) {
  const auto& m = ch.su_fading;
  const double e0 = expect(m, policy.idle_power, policy.breakpoints);
  const double e1 = expect(m, policy.active_power, policy.breakpoints);
  return sensing_weights(eta, sp, cfg).mix(e0, e1);
}

double interference(const PowerPolicy& policy, double eta, const SensingParams& sp,
                    const ScenarioConfig& cfg, const ChannelParams& ch) {
  const auto w = sensing_weights(eta, sp, cfg);
  return expect(
      ch.su_fading, [&](double g) { return interference_at(policy, g, w, ch); },
      policy.breakpoints);
}

double interference_at(const PowerPolicy& policy, double gamma_s, const SensingWeights& w,
                       const ChannelParams& ch) {
  return ch.gain_sp * w.mix(policy.idle_power(gamma_s), policy.active_power(gamma_s));
}

double pu_link_capacity(double gamma_p, CapacityLaw law) {
  switch (law) {
    case CapacityLaw::shannon_1plus:
      return std::log2(1.0 + gamma_p);
    case CapacityLaw::paper_literal:
      return std::log2(gamma_p);
  }
  return 0.0;
}

double pu_capacity_max(const ChannelParams& ch, const ScenarioConfig& cfg) {
  const auto law = cfg.capacity_law;
  return expect(ch.pu_fading, [law](double g) { return pu_link_capacity(g, law); });
}

PuLossRecord pu_capacity_loss(double eta, const SensingParams& sp, const ChannelParams& ch,
                              const ScenarioConfig& cfg) {
  PuLossRecord r;
  r.eta = eta;
  r.p_missed = prob_missed(eta, sp);
  r.p_outage = r.p_missed;
  const double p_detect = prob_detection(eta, sp);
  if (!(p_detect > 0.0) || r.p_outage >= 1.0) {
    throw std::domain_error("pu_capacity_loss: outage probability is 1, quantile is unbounded");
  }
  // Quantile through the survival side keeps precision when P_out is close to 1.
  r.gamma_p_min = inverse_survival(ch.pu_fading, p_detect);
  if (r.p_outage == 0.0 || r.gamma_p_min == 0.0) {
    r.gamma_p_min = 0.0;
    r.capacity_loss = 0.0;
    return r;
  }
  // C_max - int_{g_min}^inf cap p  ==  int_0^{g_min} cap p
  const auto law = cfg.capacity_law;
  r.capacity_loss = expect_between(
      ch.pu_fading, [law](double g) { return pu_link_capacity(g, law); }, 0.0, r.gamma_p_min);
  return r;
}

PuLossCurve pu_loss_curve(std::span<const double> eta_grid, const SensingParams& sp,
                          const ChannelParams& ch, const ScenarioConfig& cfg) {
  PuLossCurve out;
  out.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    out.push_back(pu_capacity_loss(eta, sp, ch, cfg));
  }
  return out;
}

}  // namespace cogniopt
