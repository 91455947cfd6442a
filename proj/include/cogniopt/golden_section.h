#pragma once

#include <cmath>
#include <stdexcept>

namespace cogniopt {

struct LineSearchResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lower, upper].
/// Stops once the bracket is narrower than `tolerance`.
template <typename F>
LineSearchResult golden_section_maximize(F&& f, double lower, double upper, double tolerance,
                                         int max_iterations = 200) {
  if (!(upper >= lower) || !(tolerance > 0.0)) {
    throw std::invalid_argument("golden_section_maximize: need lower <= upper and tolerance > 0");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lower;
  double b = upper;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evaluations = 2;

  for (int i = 0; i < max_iterations && (b - a) > tolerance; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evaluations;
  }
  return fc >= fd ? LineSearchResult{c, fc, evaluations} : LineSearchResult{d, fd, evaluations};
}

}  // namespace cogniopt
