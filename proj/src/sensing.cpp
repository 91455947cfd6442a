#include "cogniopt/sensing.h"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cogniopt {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

void require_threshold(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::domain_error("sensing threshold must be finite and >= 0, got " + std::to_string(eta));
  }
}

double gaussian_kernel(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double detection_scale(const SensingParams& p) {
  return std::sqrt(static_cast<double>(p.num_samples) / (2.0 * p.sensed_snr + 1.0));
}

}  // namespace

double q_function(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("q_function: argument must be finite");
  }
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_function_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("q_function_inverse: probability must lie in (0, 1)");
  }
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

SensingParams SensingParams::from_timing(double sensed_snr, double noise_variance,
                                         double sampling_freq, double sensing_time,
                                         std::optional<double> frame_duration) {
  SensingParams p;
  p.sensed_snr = sensed_snr;
  p.noise_variance = noise_variance;
  p.sampling_freq = sampling_freq;
  p.sensing_time = sensing_time;
  p.frame_duration = frame_duration;
  p.num_samples = static_cast<std::int64_t>(std::llround(sensing_time * sampling_freq));
  p.validate();
  return p;
}

SensingParams SensingParams::from_samples(double sensed_snr, std::int64_t num_samples,
                                          double noise_variance) {
  SensingParams p;
  p.sensed_snr = sensed_snr;
  p.num_samples = num_samples;
  p.noise_variance = noise_variance;
  p.validate();
  return p;
}

void SensingParams::validate() const {
  if (!(sensed_snr > 0.0) || !std::isfinite(sensed_snr)) {
    throw std::invalid_argument("sensed_snr must be finite and > 0");
  }
  if (num_samples < 1) {
    throw std::invalid_argument("num_samples must be >= 1");
  }
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise_variance must be finite and > 0");
  }
  if (sampling_freq && !(*sampling_freq > 0.0)) {
    throw std::invalid_argument("sampling_freq must be > 0");
  }
  if (sensing_time && !(*sensing_time > 0.0)) {
    throw std::invalid_argument("sensing_time must be > 0");
  }
  if (frame_duration && !(*frame_duration > 0.0)) {
    throw std::invalid_argument("frame_duration must be > 0");
  }
  if (sampling_freq && sensing_time) {
    const auto expected = std::llround(*sensing_time * *sampling_freq);
    if (expected != num_samples) {
      throw std::invalid_argument("num_samples must equal round(sensing_time * sampling_freq)");
    }
  }
  if (frame_duration && sampling_freq &&
      static_cast<double>(num_samples) > *frame_duration * *sampling_freq) {
    throw std::invalid_argument("num_samples exceeds frame_duration * sampling_freq");
  }
}

double false_alarm_argument(double eta, const SensingParams& p) {
  require_threshold(eta);
  return (eta / p.noise_variance - 1.0) * std::sqrt(static_cast<double>(p.num_samples));
}

double detection_argument(double eta, const SensingParams& p) {
  require_threshold(eta);
  return (eta / p.noise_variance - p.sensed_snr - 1.0) * detection_scale(p);
}

double prob_false_alarm(double eta, const SensingParams& p) {
  return q_function(false_alarm_argument(eta, p));
}

double prob_detection(double eta, const SensingParams& p) {
  return q_function(detection_argument(eta, p));
}

double prob_no_false_alarm(double eta, const SensingParams& p) {
  return q_function(-false_alarm_argument(eta, p));
}

double prob_missed(double eta, const SensingParams& p) {
  return q_function(-detection_argument(eta, p));
}

double d_pf_deta(double eta, const SensingParams& p) {
  const double scale = std::sqrt(static_cast<double>(p.num_samples)) / p.noise_variance;
  return -scale * gaussian_kernel(false_alarm_argument(eta, p));
}

double d_pd_deta(double eta, const SensingParams& p) {
  const double scale = detection_scale(p) / p.noise_variance;
  return -scale * gaussian_kernel(detection_argument(eta, p));
}

double threshold_for_false_alarm(double p_false_alarm, const SensingParams& p) {
  const double arg = q_function_inverse(p_false_alarm);
  const double eta =
      p.noise_variance * (1.0 + arg / std::sqrt(static_cast<double>(p.num_samples)));
  if (eta < 0.0) {
    throw std::domain_error("threshold_for_false_alarm: target requires a negative threshold");
  }
  return eta;
}

DetectorPoint detector_point(double eta, const SensingParams& p) {
  DetectorPoint d;
  d.threshold = eta;
  d.p_false_alarm = prob_false_alarm(eta, p);
  d.p_detection = prob_detection(eta, p);
  d.p_missed = 1.0 - d.p_detection;
  return d;
}

std::vector<DetectorPoint> roc_curve(const SensingParams& p, std::span<const double> eta_grid) {
  if (eta_grid.empty()) {
    throw std::domain_error("roc_curve: empty threshold grid");
  }
  std::vector<DetectorPoint> out;
  out.reserve(eta_grid.size());
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) {
      throw std::domain_error("roc_curve: threshold grid must be strictly increasing");
    }
    out.push_back(detector_point(eta_grid[i], p));
  }
  return out;
}

}  // namespace cogniopt
