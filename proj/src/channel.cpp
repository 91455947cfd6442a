#include "cogniopt/channel.h"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace cogniopt {

namespace {

constexpr double kQuadRelTol = 1e-12;
constexpr double kQuadAbsTarget = 1e-15;
constexpr double kSliverWidth = 1e-10;
constexpr std::size_t kMaxPanels = 4000;

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b) {
  double error = 0.0;
  const double value = Rule::integrate(f, a, b, 0, 0.0, &error);
  // Boost reports the depth-0 error on the reference interval [-1, 1].
  return {a, b, value, error * 0.5 * (b - a)};
}

// Globally adaptive Gauss-Kronrod (G7/K15): always bisects the panel with the
// largest error estimate, so endpoint singularities are refined locally.
double integrate_segment(const Integrand& weighted, double a, double b) {
  std::priority_queue<Panel> panels;
  panels.push(evaluate_panel(weighted, a, b));
  double value = panels.top().value;
  double error = panels.top().error;

  while (error > std::max(kQuadAbsTarget, kQuadRelTol * std::abs(value)) &&
         panels.size() < kMaxPanels) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    const Panel left = evaluate_panel(weighted, worst.a, mid);
    const Panel right = evaluate_panel(weighted, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  for (; !panels.empty(); panels.pop()) {
    value += panels.top().value;
    error += panels.top().error;
  }
  if (!std::isfinite(value) || error > kExpectAbsTol * std::max(1.0, std::abs(value))) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: value=" << value
        << " error_estimate=" << error << " panels_limit=" << kMaxPanels;
    throw NumericalError(msg.str());
  }
  return value;
}

}  // namespace

void FadingModel::validate() const {
  if (!(mean_snr > 0.0) || !std::isfinite(mean_snr)) {
    throw std::invalid_argument("fading mean_snr must be finite and > 0");
  }
}

double FadingModel::truncation_point() const {
  switch (kind) {
    case FadingKind::rayleigh:
      return -mean_snr * std::log(kTailMass);
    case FadingKind::deterministic:
      return mean_snr;
  }
  return mean_snr;
}

void ChannelParams::validate() const {
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw std::invalid_argument("noise_power must be finite and > 0");
  }
  if (!(gain_sp > 0.0) || !std::isfinite(gain_sp)) {
    throw std::invalid_argument("gain_sp must be finite and > 0");
  }
  su_fading.validate();
  pu_fading.validate();
}

double pdf(const FadingModel& m, double x) {
  if (x < 0.0) {
    throw std::domain_error("pdf: snr must be >= 0");
  }
  switch (m.kind) {
    case FadingKind::rayleigh:
      return std::exp(-x / m.mean_snr) / m.mean_snr;
    case FadingKind::deterministic:
      return x == m.mean_snr ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return 0.0;
}

double cdf(const FadingModel& m, double x) {
  if (x < 0.0) {
    throw std::domain_error("cdf: snr must be >= 0");
  }
  switch (m.kind) {
    case FadingKind::rayleigh:
      return -std::expm1(-x / m.mean_snr);
    case FadingKind::deterministic:
      return x >= m.mean_snr ? 1.0 : 0.0;
  }
  return 0.0;
}

double inverse_cdf(const FadingModel& m, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::domain_error("inverse_cdf: probability must lie in [0, 1)");
  }
  switch (m.kind) {
    case FadingKind::rayleigh:
      return -m.mean_snr * std::log1p(-u);
    case FadingKind::deterministic:
      return u == 0.0 ? 0.0 : m.mean_snr;
  }
  return 0.0;
}

double inverse_survival(const FadingModel& m, double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::domain_error("inverse_survival: survival probability must lie in (0, 1]");
  }
  switch (m.kind) {
    case FadingKind::rayleigh:
      return -m.mean_snr * std::log(s);
    case FadingKind::deterministic:
      return s == 1.0 ? 0.0 : m.mean_snr;
  }
  return 0.0;
}

double expect(const FadingModel& m, const Integrand& f, std::span<const double> breakpoints) {
  return expect_between(m, f, 0.0, std::numeric_limits<double>::infinity(), breakpoints);
}

double expect_between(const FadingModel& m, const Integrand& f, double lo, double hi,
                      std::span<const double> breakpoints) {
  if (!(lo >= 0.0) || !(hi >= lo)) {
    throw std::domain_error("expect_between: need 0 <= lo <= hi");
  }
  if (m.kind == FadingKind::deterministic) {
    return (m.mean_snr >= lo && m.mean_snr <= hi) ? f(m.mean_snr) : 0.0;
  }

  const double upper = std::min(hi, m.truncation_point());
  if (lo >= upper) {
    return 0.0;
  }
  std::vector<double> knots{lo};
  for (double b : breakpoints) {
    if (b > lo && b < upper) knots.push_back(b);
  }
  knots.push_back(upper);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  const double inv_mean = 1.0 / m.mean_snr;
  const Integrand weighted = [&](double x) { return f(x) * std::exp(-x * inv_mean) * inv_mean; };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    // Slivers below the abscissa resolution carry no measurable mass.
    if (b - a <= kSliverWidth * std::max(1.0, b)) {
      total += 0.5 * (b - a) * (weighted(a) + weighted(b));
      continue;
    }
    total += integrate_segment(weighted, a, b);
  }
  return total;
}

}  // namespace cogniopt
