#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ats/matrix.hpp"

namespace ats {

/// A trainable weight group: value plus an explicitly managed gradient
/// accumulator of the same shape.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad.fill(0.0); }
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators, one pair per Parameter, plus the shared
/// step counter. Moments are matched to parameters by position.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const std::vector<Parameter*>& params, AdamConfig cfg = {});

  void step(const std::vector<Parameter*>& params);

  long step_count() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return cfg_; }
  const Matrix& first_moment(std::size_t i) const { return m_[i]; }
  const Matrix& second_moment(std::size_t i) const { return v_[i]; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

/// Standard Adam update with bias correction. Gradients are left untouched;
/// the caller zeroes them at the start of the next batch.
void adam_step(const std::vector<Parameter*>& params, AdamState& state);

// Deterministic RNG helpers. All draws go through these so that equal seeds
// give bitwise-equal trajectories regardless of the standard library.
double uniform_unit(std::mt19937_64& rng);                              // [0, 1)
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound); // [0, bound)

template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// Uniform init in +-sqrt(6/(rows+cols)), fully determined by the seed.
Matrix glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace ats
