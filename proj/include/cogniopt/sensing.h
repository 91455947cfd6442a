#pragma once
// Energy-detector characteristics under the Gaussian (CLT) approximation of the
// N-sample energy statistic.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cogniopt {

/// Gaussian tail probability Q(x) = P[Z > x] for a standard normal Z.
/// Throws std::domain_error for non-finite x.
double q_function(double x);

/// Inverse of q_function on (0, 1).
double q_function_inverse(double p);

struct SensingParams {
  double sensed_snr = 1.0;       // linear SNR of the primary signal at the sensor
  std::int64_t num_samples = 1;  // N
  double noise_variance = 1.0;   // sigma^2
  std::optional<double> sampling_freq;   // Hz
  std::optional<double> sensing_time;    // s
  std::optional<double> frame_duration;  // s, bounds N <= T * fs

  /// N = round(tau * fs); validates the frame bound when T is given.
  static SensingParams from_timing(double sensed_snr, double noise_variance,
                                   double sampling_freq, double sensing_time,
                                   std::optional<double> frame_duration = std::nullopt);
  static SensingParams from_samples(double sensed_snr, std::int64_t num_samples,
                                    double noise_variance = 1.0);

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct DetectorPoint {
  double threshold = 0.0;
  double p_false_alarm = 0.0;
  double p_detection = 0.0;
  double p_missed = 1.0;
};

// Q-function arguments of the two closed forms. Exposed so that complements can
// be taken as Q(-arg) instead of 1 - Q(arg).
double false_alarm_argument(double eta, const SensingParams& p);
double detection_argument(double eta, const SensingParams& p);

double prob_false_alarm(double eta, const SensingParams& p);
double prob_detection(double eta, const SensingParams& p);
/// 1 - P_f evaluated without cancellation.
double prob_no_false_alarm(double eta, const SensingParams& p);
/// 1 - P_d evaluated without cancellation.
double prob_missed(double eta, const SensingParams& p);

/// dP_f/deta. Negative: P_f falls as the threshold rises.
double d_pf_deta(double eta, const SensingParams& p);
/// dP_d/deta. Negative for the same reason.
double d_pd_deta(double eta, const SensingParams& p);

/// Threshold giving the requested false-alarm probability.
double threshold_for_false_alarm(double p_false_alarm, const SensingParams& p);

DetectorPoint detector_point(double eta, const SensingParams& p);

/// Evaluates the detector on a strictly increasing grid of non-negative thresholds.
std::vector<DetectorPoint> roc_curve(const SensingParams& p, std::span<const double> eta_grid);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace cogniopt
