#include "ats/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ats {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec sigmoid_vec(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigmoid(v[i]);
  return out;
}

Vec tanh_vec(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  return out;
}

Vec softmax(const Vec& v) {
  if (v.empty()) throw ShapeMismatch("softmax: empty input");
  const double mx = *std::max_element(v.begin(), v.end());
  Vec out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

Vec masked_softmax(const Vec& scores, const std::vector<std::uint8_t>& mask) {
  if (scores.size() != mask.size()) {
    throw ShapeMismatch("masked_softmax: scores/mask length mismatch");
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i] && scores[i] > mx) mx = scores[i];
  }
  if (!std::isfinite(mx)) {
    throw EmptyAttentionSupport("masked_softmax: every position is masked");
  }
  Vec out(scores.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask[i]) continue;
    out[i] = std::exp(scores[i] - mx);
    sum += out[i];
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) out[i] /= sum;
  }
  return out;
}

std::size_t argmax(const Vec& v) {
  if (v.empty()) throw ShapeMismatch("argmax: empty input");
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

CeResult sparse_ce_loss(const Matrix& logits, const std::vector<int>& targets,
                        const std::vector<std::uint8_t>& mask) {
  const std::size_t steps = logits.rows();
  if (targets.size() != steps || mask.size() != steps) {
    throw ShapeMismatch("sparse_ce_loss: targets/mask length must equal logit rows");
  }
  std::size_t count = 0;
  for (auto m : mask) count += (m != 0);
  if (count == 0) throw EmptyMask("sparse_ce_loss: no unmasked step");

  CeResult res;
  res.count = count;
  res.dlogits = Matrix(steps, logits.cols());
  double total = 0.0;
  const double inv_count = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < steps; ++i) {
    if (!mask[i]) continue;
    const int t = targets[i];
    if (t < 0 || static_cast<std::size_t>(t) >= logits.cols()) {
      throw IdOutOfRange("sparse_ce_loss: target id " + std::to_string(t) +
                         " out of range for " + std::to_string(logits.cols()) +
                         " classes");
    }
    Vec probs = softmax(row_of(logits, i));
    total += -std::log(std::max(probs[static_cast<std::size_t>(t)],
                                std::numeric_limits<double>::min()));
    for (std::size_t v = 0; v < probs.size(); ++v) {
      res.dlogits(i, v) = probs[v] * inv_count;
    }
    res.dlogits(i, static_cast<std::size_t>(t)) -= inv_count;
  }
  res.loss = total * inv_count;
  return res;
}

}  // namespace ats
