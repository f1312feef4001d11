#pragma once

#include <cstdint>
#include <vector>

#include "ats/matrix.hpp"

namespace ats {

double sigmoid(double x);
Vec sigmoid_vec(const Vec& v);
Vec tanh_vec(const Vec& v);

// Derivatives expressed through the activation value itself.
inline double dsigmoid_from_value(double s) { return s * (1.0 - s); }
inline double dtanh_from_value(double t) { return 1.0 - t * t; }

/// Numerically stable softmax (max subtraction). Entries positive, sum 1.
Vec softmax(const Vec& v);

/// Softmax restricted to mask!=0 positions; masked positions get exactly 0.
/// Throws EmptyAttentionSupport when every position is masked.
Vec masked_softmax(const Vec& scores, const std::vector<std::uint8_t>& mask);

std::size_t argmax(const Vec& v);

struct CeResult {
  double loss = 0.0;     // mean of -log p(target) over masked-in steps
  Matrix dlogits;        // (softmax - onehot)/count on masked-in rows, 0 elsewhere
  std::size_t count = 0; // number of masked-in steps
};

/// Sparse categorical cross entropy over a (steps x V) logits matrix.
/// mask[i] != 0 marks steps that contribute. Throws EmptyMask when none do.
CeResult sparse_ce_loss(const Matrix& logits, const std::vector<int>& targets,
                        const std::vector<std::uint8_t>& mask);

}  // namespace ats
