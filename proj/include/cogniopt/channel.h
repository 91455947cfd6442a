#pragma once
// Fading distributions of link SNRs and the expectation operator used for every
// ergodic quantity.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace cogniopt {

/// Raised when a quadrature cannot reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

enum class FadingKind {
  rayleigh,       // exponential SNR (Rayleigh amplitude)
  deterministic,  // all mass at mean_snr; AWGN-only link
};

struct FadingModel {
  FadingKind kind = FadingKind::rayleigh;
  double mean_snr = 1.0;

  static FadingModel rayleigh(double mean_snr = 1.0) { return {FadingKind::rayleigh, mean_snr}; }
  static FadingModel deterministic(double snr) { return {FadingKind::deterministic, snr}; }

  void validate() const;

  /// Upper integration limit; the discarded tail holds less than kTailMass.
  double truncation_point() const;

  static constexpr double kTailMass = 1e-12;
};

struct ChannelParams {
  double noise_power = 1.0;  // N0
  double gain_sp = 1.0;      // SU-Tx -> PU-Rx power gain
  FadingModel su_fading;
  FadingModel pu_fading;

  void validate() const;
};

double pdf(const FadingModel& m, double x);
double cdf(const FadingModel& m, double x);
/// Quantile; u must lie in [0, 1).
double inverse_cdf(const FadingModel& m, double u);
/// Quantile expressed through the survival probability s = 1 - u, s in (0, 1].
double inverse_survival(const FadingModel& m, double s);

using Integrand = std::function<double(double)>;

/// Absolute accuracy demanded from every expectation.
inline constexpr double kExpectAbsTol = 1e-9;

/// E[f(X)] for X ~ m. `breakpoints` lists points where f has a kink or jump so
/// the quadrature never straddles them.
double expect(const FadingModel& m, const Integrand& f, std::span<const double> breakpoints = {});

/// Partial expectation over [lo, hi] (hi may be +inf).
double expect_between(const FadingModel& m, const Integrand& f, double lo, double hi,
                      std::span<const double> breakpoints = {});

}  // namespace cogniopt
