#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cogniopt/sensing.h"

using namespace cogniopt;

namespace {

SensingParams paper_detector() { return SensingParams::from_samples(db_to_linear(-15.0), 12000, 1.0); }

}  // namespace

TEST_CASE("q_function reference values") {
  CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_function(1.0) == doctest::Approx(0.158655253931457051).epsilon(1e-13));
  CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.158655253931457051).epsilon(1e-13));
  // deep tail keeps relative accuracy
  CHECK(q_function(10.0) == doctest::Approx(7.61985302416052606e-24).epsilon(1e-12));
  CHECK(q_function(37.0) > 0.0);
  CHECK(q_function(-40.0) == 1.0);
}

TEST_CASE("q_function rejects non-finite input") {
  CHECK_THROWS_AS(q_function(NAN), std::domain_error);
  CHECK_THROWS_AS(q_function(INFINITY), std::domain_error);
}

TEST_CASE("q_function_inverse round trips") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999}) {
    CHECK(q_function(q_function_inverse(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS(q_function_inverse(0.0));
  CHECK_THROWS(q_function_inverse(1.0));
}

TEST_CASE("paper detector spot values") {
  const auto sp = paper_detector();
  CHECK(false_alarm_argument(1.02, sp) == doctest::Approx(2.19089023002066445).epsilon(1e-12));
  CHECK(detection_argument(1.02, sp) == doctest::Approx(-1.234763337394132).epsilon(1e-12));
  CHECK(prob_false_alarm(1.02, sp) == doctest::Approx(0.0142298684581552885).epsilon(1e-11));
  CHECK(prob_detection(1.02, sp) == doctest::Approx(0.891540702102823479).epsilon(1e-11));
  CHECK(prob_false_alarm(0.0, sp) == 1.0);
}

TEST_CASE("derivative magnitudes at the distribution centres") {
  const auto sp = paper_detector();
  CHECK(d_pf_deta(1.0, sp) == doctest::Approx(-43.7019372236831628).epsilon(1e-12));
  CHECK(d_pd_deta(1.0 + sp.sensed_snr, sp) == doctest::Approx(-42.3822394990139976).epsilon(1e-12));
}

TEST_CASE("complements are accurate in the far tail") {
  const auto sp = paper_detector();
  const double eta = 0.8;
  CHECK(prob_no_false_alarm(eta, sp) > 0.0);
  CHECK(prob_no_false_alarm(eta, sp) < 1e-100);
  CHECK(prob_missed(1.2, sp) == doctest::Approx(q_function(-detection_argument(1.2, sp))).epsilon(1e-14));
}

TEST_CASE("sensing parameter construction") {
  const auto sp = SensingParams::from_timing(0.05, 1.0, 6e6, 2e-3, 0.1);
  CHECK(sp.num_samples == 12000);
  CHECK_THROWS_AS(SensingParams::from_timing(0.05, 1.0, 6e6, 2e-3, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(SensingParams::from_samples(0.05, 0), std::invalid_argument);
  CHECK_THROWS_AS(SensingParams::from_samples(-0.1, 100), std::invalid_argument);
  CHECK_THROWS_AS(SensingParams::from_samples(0.1, 100, 0.0), std::invalid_argument);
}

TEST_CASE("negative threshold is rejected") {
  const auto sp = paper_detector();
  CHECK_THROWS_AS(prob_false_alarm(-0.1, sp), std::domain_error);
  CHECK_THROWS_AS(prob_detection(-0.1, sp), std::domain_error);
}

TEST_CASE("threshold_for_false_alarm inverts prob_false_alarm") {
  const auto sp = paper_detector();
  for (double p : {1e-3, 0.01, 0.1, 0.5}) {
    CHECK(prob_false_alarm(threshold_for_false_alarm(p, sp), sp) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("roc_curve grid validation") {
  const auto sp = paper_detector();
  CHECK_THROWS_AS(roc_curve(sp, std::vector<double>{}), std::domain_error);
  CHECK_THROWS_AS(roc_curve(sp, std::vector<double>{1.0, 1.0}), std::domain_error);
  const auto pts = roc_curve(sp, std::vector<double>{0.95, 1.0, 1.05});
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].p_missed == doctest::Approx(1.0 - pts[1].p_detection));
}

TEST_CASE("property: detector probabilities are ordered and monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> snr_db(-25.0, 0.0);
  std::uniform_int_distribution<int> samples(10, 50000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sp = SensingParams::from_samples(db_to_linear(snr_db(rng)), samples(rng), 0.5 + 2 * unit(rng));
    double eta = sp.noise_variance * (0.5 + unit(rng));
    const double next = eta + 0.01 * sp.noise_variance;
    const double pf = prob_false_alarm(eta, sp);
    const double pd = prob_detection(eta, sp);
    CHECK(pf >= 0.0);
    CHECK(pd <= 1.0);
    CHECK(pd >= pf);  // signal only adds energy
    CHECK(prob_false_alarm(next, sp) <= pf);
    CHECK(prob_detection(next, sp) <= pd);
    CHECK(d_pf_deta(eta, sp) <= 0.0);
    CHECK(d_pd_deta(eta, sp) <= 0.0);
    CHECK(prob_false_alarm(eta, sp) + prob_no_false_alarm(eta, sp) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("property: higher sensed SNR dominates the ROC") {
  for (std::int64_t n : {6000, 12000}) {
    const auto weak = SensingParams::from_samples(db_to_linear(-15.0), n);
    const auto strong = SensingParams::from_samples(db_to_linear(-12.0), n);
    for (double pf = 1e-3; pf <= 0.5; pf *= 1.5) {
      const double pm_weak = prob_missed(threshold_for_false_alarm(pf, weak), weak);
      const double pm_strong = prob_missed(threshold_for_false_alarm(pf, strong), strong);
      CHECK(pm_strong < pm_weak);
    }
  }
}
