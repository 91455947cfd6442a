#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cogniopt/capacity.h"

using namespace cogniopt;

namespace {

SensingParams paper_detector() { return SensingParams::from_samples(db_to_linear(-15.0), 12000, 1.0); }

SensingWeights weights_for(double pi0, double pf, double pd) {
  const double pi1 = 1.0 - pi0;
  return {pi0 * (1 - pf), pi0 * pf, pi1 * pd, pi1 * (1 - pd)};
}

}  // namespace

TEST_CASE("state weights mix capacity and power") {
  const auto w = weights_for(0.6, 0.1, 0.9);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(w.mix(2.0, 1.0) == doctest::Approx(1.58).epsilon(1e-14));
  CHECK(w.mix(0.1485, 0.05) == doctest::Approx(0.10713).epsilon(1e-12));
}

TEST_CASE("sensing_weights follow the detector") {
  const auto sp = paper_detector();
  ScenarioConfig cfg;
  const auto w = sensing_weights(1.02, sp, cfg);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.idle_false_alarm == doctest::Approx(0.6 * 0.0142298684581552885).epsilon(1e-11));
  CHECK(w.active_detected == doctest::Approx(0.4 * 0.891540702102823479).epsilon(1e-11));
}

TEST_CASE("instantaneous capacity") {
  CHECK(instantaneous_capacity(0.0, 5.0, 1.0) == 0.0);
  CHECK(instantaneous_capacity(1.0, 3.0, 1.0) == doctest::Approx(2.0));
  CHECK(instantaneous_capacity(-1.0, 3.0, 1.0) == 0.0);
}

TEST_CASE("constant policy moments on unit Rayleigh") {
  ChannelParams ch;
  const auto mom = ergodic_moments(constant_policy(1.0, 0.0), ch);
  CHECK(mom.mean_idle_power == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(mom.mean_active_power == 0.0);
  CHECK(mom.idle_capacity == doctest::Approx(0.860347382270885951).epsilon(1e-10));
  CHECK(mom.active_capacity == 0.0);
  const auto [c0, c1] = ergodic_capacity_pair(constant_policy(1.0, 0.0), ch);
  CHECK(c0 == doctest::Approx(mom.idle_capacity));
  CHECK(c1 == 0.0);
}

TEST_CASE("interference pairs busy power with detection") {
  ChannelParams ch;
  ch.gain_sp = 2.0;
  const auto sp = paper_detector();
  ScenarioConfig cfg;
  const auto policy = constant_policy(1.0, 0.25);
  const auto w = sensing_weights(1.02, sp, cfg);
  const double expected = 2.0 * w.mix(1.0, 0.25);
  CHECK(interference(policy, 1.02, sp, cfg, ch) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(interference_at(policy, 0.7, w, ch) == doctest::Approx(expected));
  CHECK(avg_power(policy, 1.02, sp, cfg, ch) == doctest::Approx(expected / 2.0).epsilon(1e-10));
}

TEST_CASE("PU capacity maximum under both laws") {
  ChannelParams ch;
  ScenarioConfig cfg;
  CHECK(pu_capacity_max(ch, cfg) == doctest::Approx(0.860347382270885951).epsilon(1e-10));
  cfg.capacity_law = CapacityLaw::paper_literal;
  CHECK(pu_capacity_max(ch, cfg) == doctest::Approx(-0.832746177276867151).epsilon(1e-9));
}

TEST_CASE("PU capacity loss chain") {
  const auto sp = paper_detector();
  ChannelParams ch;
  ScenarioConfig cfg;
  const double scale = std::sqrt(12000.0 / (2 * sp.sensed_snr + 1));
  const double eta = 1.0 + sp.sensed_snr + q_function_inverse(0.9) / scale;
  const auto r = pu_capacity_loss(eta, sp, ch, cfg);
  CHECK(r.p_outage == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.gamma_p_min == doctest::Approx(0.105360515657826301).epsilon(1e-11));
  CHECK(r.capacity_loss == doctest::Approx(0.00721962350693573728).epsilon(1e-9));
}

TEST_CASE("PU capacity loss limits") {
  const auto sp = paper_detector();
  ChannelParams ch;
  ScenarioConfig cfg;
  // detector never misses: no loss
  const auto r = pu_capacity_loss(0.5, sp, ch, cfg);
  CHECK(r.capacity_loss == 0.0);
  CHECK(r.gamma_p_min == 0.0);
  CHECK_THROWS_AS(pu_capacity_loss(5.0, sp, ch, cfg), std::domain_error);
}

TEST_CASE("scenario validation") {
  ScenarioConfig cfg;
  cfg.prior_idle = 0.7;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.avg_power_budget = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.loss_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("property: capacity and power are sandwiched by their states") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sp = paper_detector();
  ChannelParams ch;
  ScenarioConfig cfg;
  for (int i = 0; i < 40; ++i) {
    const double eta = 0.9 + 0.2 * u(rng);
    const double p0 = 3 * u(rng);
    const double p1 = 3 * u(rng);
    const auto policy = constant_policy(p0, p1);
    const auto [c0, c1] = ergodic_capacity_pair(policy, ch);
    const double cs = su_capacity(c0, c1, eta, sp, cfg);
    CHECK(cs >= std::min(c0, c1) - 1e-12);
    CHECK(cs <= std::max(c0, c1) + 1e-12);
    const double h = avg_power(policy, eta, sp, cfg, ch);
    CHECK(h >= std::min(p0, p1) - 1e-9);
    CHECK(h <= std::max(p0, p1) + 1e-9);
  }
}

TEST_CASE("property: fixed-policy capacity rises with the threshold when C0 > C1") {
  const auto sp = paper_detector();
  ScenarioConfig cfg;
  const double c0 = 2.0;
  const double c1 = 0.5;
  for (double eta = 0.9; eta <= 1.1; eta += 0.005) {
    const double h = 1e-6;
    const double slope = (su_capacity(c0, c1, eta + h, sp, cfg) - su_capacity(c0, c1, eta - h, sp, cfg)) / (2 * h);
    const double kernel = -cfg.prior_idle * d_pf_deta(eta, sp) - cfg.prior_active * d_pd_deta(eta, sp);
    CHECK(kernel > 0.0);
    CHECK(slope >= 0.0);
    CHECK(std::abs(slope - (c0 - c1) * kernel) <= 1e-5 * (c0 - c1) * kernel + 1e-9);
  }
}

TEST_CASE("property: fixed-policy capacity is concave above sigma^2 (1 + gamma)") {
  const auto sp = paper_detector();
  ScenarioConfig cfg;
  const double start = 1.0 + sp.sensed_snr;
  const double step = 1e-3;
  for (int i = 1; i < 100; ++i) {
    const double eta = start + i * step;
    const double d2 = su_capacity(2.0, 0.5, eta + step, sp, cfg) - 2 * su_capacity(2.0, 0.5, eta, sp, cfg) +
                      su_capacity(2.0, 0.5, eta - step, sp, cfg);
    CHECK(d2 <= 1e-9);
  }
}

TEST_CASE("property: PU loss never decreases with the threshold") {
  const auto sp = paper_detector();
  ChannelParams ch;
  ScenarioConfig cfg;
  double prev = 0.0;
  for (double eta = 0.9; eta <= 1.06; eta += 0.002) {
    const double loss = pu_capacity_loss(eta, sp, ch, cfg).capacity_loss;
    CHECK(loss >= prev);
    prev = loss;
  }
}
