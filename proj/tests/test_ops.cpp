#include <cmath>
#include <random>

#include <doctest.h>

#include "ats/grad_check.hpp"
#include "ats/ops.hpp"

using namespace ats;

TEST_CASE("softmax of a constant vector is uniform") {
  for (double c : {-7.0, 0.0, 123.0}) {
    const Vec out = softmax(Vec{c, c, c});
    for (double v : out) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("softmax hand value") {
  const Vec out = softmax(Vec{0.0, std::log(2.0)});
  CHECK(out[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("softmax survives large magnitudes") {
  const Vec out = softmax(Vec{1000.0, 0.0});
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(std::isfinite(out[0]));
}

TEST_CASE("softmax properties over random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(-500.0, 500.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vec v(2 + rng() % 8);
    for (double& x : v) x = scale(rng);
    const Vec out = softmax(v);
    double sum = 0.0;
    for (double x : out) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(argmax(out) == argmax(v));
  }
}

TEST_CASE("masked softmax zeroes masked positions and ignores their scores") {
  const Vec scores{5.0, 1.0, -2.0, 99.0};
  const std::vector<std::uint8_t> mask{1, 1, 1, 0};
  const Vec out = masked_softmax(scores, mask);
  CHECK(out[3] == 0.0);
  CHECK(out[0] + out[1] + out[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(masked_softmax(scores, std::vector<std::uint8_t>{0, 0, 0, 0}),
                  EmptyAttentionSupport);
}

TEST_CASE("masked softmax is shift invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec scores(6);
    std::vector<std::uint8_t> mask{1, 1, 1, 1, 0, 0};
    for (double& x : scores) x = dist(rng);
    const double shift = dist(rng) * 10.0;
    Vec shifted = scores;
    for (double& x : shifted) x += shift;
    const Vec a = masked_softmax(scores, mask);
    const Vec b = masked_softmax(shifted, mask);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("cross entropy of a confident correct prediction is near zero") {
  Matrix logits(1, 4);
  logits(0, 2) = 50.0;
  const CeResult ce = sparse_ce_loss(logits, {2}, {1});
  CHECK(ce.loss == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cross entropy of uniform logits is log V") {
  Matrix logits(3, 4, 0.25);
  const CeResult ce = sparse_ce_loss(logits, {0, 1, 3}, {1, 1, 1});
  CHECK(ce.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("cross entropy with an all-pad mask throws") {
  Matrix logits(2, 4);
  CHECK_THROWS_AS(sparse_ce_loss(logits, {0, 1}, {0, 0}), EmptyMask);
}

TEST_CASE("cross entropy rejects out-of-range targets") {
  Matrix logits(1, 4);
  CHECK_THROWS_AS(sparse_ce_loss(logits, {4}, {1}), IdOutOfRange);
}

TEST_CASE("cross entropy gradient matches finite differences") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t steps = 1 + rng() % 5;
    const std::size_t v = 2 + rng() % 7;  // V <= 8
    Parameter logits("logits", Matrix(steps, v));
    for (std::size_t i = 0; i < logits.value.size(); ++i) {
      logits.value.data()[i] = dist(rng);
    }
    std::vector<int> targets(steps);
    std::vector<std::uint8_t> mask(steps, 0);
    for (std::size_t i = 0; i < steps; ++i) targets[i] = static_cast<int>(rng() % v);
    mask[0] = 1;
    for (std::size_t i = 1; i < steps; ++i) mask[i] = rng() % 2 ? 1 : 0;

    logits.grad = sparse_ce_loss(logits.value, targets, mask).dlogits;
    const double err = grad_check(
        [&] { return sparse_ce_loss(logits.value, targets, mask).loss; },
        {&logits}, 1e-6);
    CHECK(err <= 1e-6);
  }
}
