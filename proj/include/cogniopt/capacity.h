#pragma once
// Ergodic objective and constraint functionals: SU capacity, average transmit
// power, interference at the PU receiver and the PU capacity loss.

#include <functional>
#include <utility>
#include <vector>

#include "cogniopt/channel.h"
#include "cogniopt/sensing.h"

namespace cogniopt {

enum class CapacityLaw {
  shannon_1plus,  // log2(1 + snr)
  paper_literal,  // log2(snr), may be negative
};

struct ScenarioConfig {
  double prior_idle = 0.6;
  double prior_active = 0.4;
  double avg_power_budget = 1.0;   // P_av, linear
  double peak_interference = 1.0;  // I_pk, linear
  double loss_fraction = 1.0;      // q
  CapacityLaw capacity_law = CapacityLaw::shannon_1plus;

  void validate() const;
};

/// Transmit power as a function of the SU link SNR in each sensing state.
/// Index 0 is used when the channel is declared idle, index 1 when declared busy.
struct PowerPolicy {
  double dual_lambda = 0.0;
  std::function<double(double)> idle_power;
  std::function<double(double)> active_power;
  std::vector<double> breakpoints;  // SNRs where either function has a kink
};

PowerPolicy constant_policy(double idle_power, double active_power);

/// The four sensing outcome probabilities weighted by the PU activity priors.
struct SensingWeights {
  double idle_clear = 0.0;        // pi0 (1 - P_f)
  double idle_false_alarm = 0.0;  // pi0 P_f
  double active_detected = 0.0;   // pi1 P_d
  double active_missed = 0.0;     // pi1 (1 - P_d)

  /// Probability that the SU transmits with its idle-state power.
  double idle_share() const { return idle_clear + active_missed; }
  double active_share() const { return idle_false_alarm + active_detected; }
  double sum() const { return idle_clear + idle_false_alarm + active_detected + active_missed; }

  /// a * idle_share + b * active_share
  double mix(double idle_value, double active_value) const {
    return idle_value * idle_share() + active_value * active_share();
  }
};

SensingWeights sensing_weights(double eta, const SensingParams& sp, const ScenarioConfig& cfg);

struct ErgodicMoments {
  double mean_idle_power = 0.0;    // E[P^0]
  double mean_active_power = 0.0;  // E[P^1]
  double idle_capacity = 0.0;      // C_0
  double active_capacity = 0.0;    // C_1
};

double instantaneous_capacity(double power, double gamma_s, double noise_power);

ErgodicMoments ergodic_moments(const PowerPolicy& policy, const ChannelParams& ch);

/// (C_0, C_1)
std::pair<double, double> ergodic_capacity_pair(const PowerPolicy& policy, const ChannelParams& ch);

double su_capacity(double idle_capacity, double active_capacity, double eta,
                   const SensingParams& sp, const ScenarioConfig& cfg);

double avg_power(const PowerPolicy& policy, double eta, const SensingParams& sp,
                 const ScenarioConfig& cfg, const ChannelParams& ch);

/// Expected interference power at the PU receiver. Detection pairs with the
/// busy-state power and missed detection with the idle-state power.
double interference(const PowerPolicy& policy, double eta, const SensingParams& sp,
                    const ScenarioConfig& cfg, const ChannelParams& ch);

/// Interference in a single fading state gamma_s.
double interference_at(const PowerPolicy& policy, double gamma_s, const SensingWeights& w,
                       const ChannelParams& ch);

/// PU link capacity at a given SNR under the configured law.
double pu_link_capacity(double gamma_p, CapacityLaw law);

double pu_capacity_max(const ChannelParams& ch, const ScenarioConfig& cfg);

struct PuLossRecord {
  double eta = 0.0;
  double p_missed = 0.0;
  double p_outage = 0.0;
  double gamma_p_min = 0.0;
  double capacity_loss = 0.0;
};

using PuLossCurve = std::vector<PuLossRecord>;

/// Missed detection -> PU outage -> minimum decodable PU SNR -> forfeited capacity.
/// Throws std::domain_error when the outage probability rounds to 1.
PuLossRecord pu_capacity_loss(double eta, const SensingParams& sp, const ChannelParams& ch,
                              const ScenarioConfig& cfg);

PuLossCurve pu_loss_curve(std::span<const double> eta_grid, const SensingParams& sp,
                          const ChannelParams& ch, const ScenarioConfig& cfg);

}  // namespace cogniopt
