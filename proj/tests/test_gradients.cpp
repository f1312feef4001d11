#include <random>

#include <doctest.h>

#include "ats/grad_check.hpp"
#include "ats/model.hpp"
#include "model_test_utils.hpp"

using namespace ats;
using ats_test::random_example;
using ats_test::tiny_hyper;

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = (double(rng() % 2001) / 1000.0 - 1.0) * scale;
  return v;
}

void copy_row_grad(Parameter& p, const Vec& g, std::size_t row = 0) {
  for (std::size_t i = 0; i < g.size(); ++i) p.grad(row, i) = g[i];
}

}  // namespace

TEST_CASE("gru cell gradients match finite differences") {
  std::mt19937_64 seeder(101);
  GruWeights w("cell", 3, 4, seeder);
  std::mt19937_64 rng(7);

  Parameter px("x", Matrix(1, 3));
  Parameter ph("h", Matrix(1, 4));
  copy_row_grad(px, Vec{0, 0, 0});  // shapes only; values set below
  for (std::size_t i = 0; i < 3; ++i) px.value(0, i) = random_vec(rng, 1)[0];
  for (std::size_t i = 0; i < 4; ++i) ph.value(0, i) = random_vec(rng, 1)[0] * 0.8;
  const Vec probe = random_vec(rng, 4);

  auto loss = [&] {
    return dot(probe, gru_cell(w, row_of(px.value, 0), row_of(ph.value, 0)));
  };

  std::vector<Parameter*> params{&w.w_z, &w.w_r, &w.w_h, &w.u_z, &w.u_r,
                                 &w.u_h, &w.b_z, &w.b_r, &w.b_h, &px, &ph};
  for (Parameter* p : params) p->zero_grad();

  detail::GruCellCache cache;
  detail::gru_cell_forward(w, row_of(px.value, 0), row_of(ph.value, 0), &cache);
  Vec dh_prev(4, 0.0);
  const Vec dx = detail::gru_cell_backward(w, cache, probe, dh_prev);
  copy_row_grad(px, dx);
  copy_row_grad(ph, dh_prev);

  CHECK(grad_check(loss, params, 1e-5) <= 1e-6);
}

TEST_CASE("attention gradients match finite differences") {
  const HyperParams hp = tiny_hyper(8, 3, 2, 3, 4, 4);
  std::mt19937_64 rng(55);
  ModelParams model = ModelParams::init(hp, 77);

  const std::size_t len = 3;
  Parameter anns("annotations", Matrix(len, 2 * hp.enc_hidden));
  for (std::size_t i = 0; i < anns.value.size(); ++i) {
    anns.value.data()[i] = random_vec(rng, 1)[0];
  }
  Parameter s_prev("s_prev", Matrix(1, hp.dec_hidden));
  for (std::size_t i = 0; i < s_prev.value.size(); ++i) {
    s_prev.value.data()[i] = random_vec(rng, 1)[0];
  }
  const Vec probe = random_vec(rng, 2 * hp.enc_hidden);

  auto build_enc = [&] {
    EncoderOutput enc;
    enc.input_len = len;
    enc.mask = make_mask(len, len + 1);
    for (std::size_t j = 0; j < len; ++j) enc.annotations.push_back(row_of(anns.value, j));
    enc.annotations.push_back(Vec(2 * hp.enc_hidden, 0.0));
    return enc;
  };
  auto loss = [&] {
    return dot(probe, attention(row_of(s_prev.value, 0), build_enc(), model).context);
  };

  std::vector<Parameter*> params{&model.attn_w, &model.attn_v, &anns, &s_prev};
  for (Parameter* p : params) p->zero_grad();

  const EncoderOutput enc = build_enc();
  const AttentionResult att = attention(row_of(s_prev.value, 0), enc, model);
  Vec ds(hp.dec_hidden, 0.0);
  std::vector<Vec> dann(len, Vec(2 * hp.enc_hidden, 0.0));
  std::vector<Vec> ann_values(enc.annotations.begin(), enc.annotations.begin() + len);
  detail::attention_backward(model, row_of(s_prev.value, 0), ann_values, att.weights,
                             probe, ds, dann);
  copy_row_grad(s_prev, ds);
  for (std::size_t j = 0; j < len; ++j) copy_row_grad(anns, dann[j], j);

  CHECK(grad_check(loss, params, 1e-5) <= 1e-6);
}

TEST_CASE("whole-model gradients match finite differences across seeds") {
  const HyperParams hp = tiny_hyper(12, 4, 3, 5, 5, 6);
  for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
    CAPTURE(seed);
    ModelParams model = ModelParams::init(hp, seed);
    std::mt19937_64 rng(seed * 97 + 1);

    TrainingBatch batch;
    batch.examples.push_back(random_example(hp, rng, 5, 3));  // 4 decoder steps

    model.zero_grad();
    ForwardCache cache;
    forward_loss(batch, model, cache);
    backward(cache, model);

    auto loss = [&] {
      ForwardCache scratch;
      return forward_loss(batch, model, scratch);
    };
    const double err = grad_check(loss, model.parameters(), 1e-5);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("gradients also flow through padded batches with short targets") {
  const HyperParams hp = tiny_hyper(12, 4, 3, 5, 6, 6);
  ModelParams model = ModelParams::init(hp, 9);
  std::mt19937_64 rng(400);

  TrainingBatch batch;
  batch.examples.push_back(random_example(hp, rng, 3, 2));  // padded input
  batch.examples.push_back(random_example(hp, rng, 6, 4));

  model.zero_grad();
  ForwardCache cache;
  forward_loss(batch, model, cache);
  backward(cache, model);

  auto loss = [&] {
    ForwardCache scratch;
    return forward_loss(batch, model, scratch);
  };
  CHECK(grad_check(loss, model.parameters(), 1e-5) <= 1e-4);
}

TEST_CASE("embedding rows unused by the batch get exactly zero gradient") {
  const HyperParams hp = tiny_hyper(12, 4, 3, 5, 5, 6);
  ModelParams model = ModelParams::init(hp, 4);

  TokenizedExample ex;
  ex.input_ids = {4, 5, 4, 0, 0};
  ex.input_len = 3;
  ex.target_ids = {1, 6, 2, 0, 0, 0};
  ex.target_len = 3;

  model.zero_grad();
  ForwardCache cache;
  forward_loss({{ex}}, model, cache);
  backward(cache, model);

  // Ids 7..11 appear nowhere in the batch.
  for (std::size_t row = 7; row < 12; ++row) {
    for (std::size_t col = 0; col < 4; ++col) {
      CHECK(model.embedding.grad(row, col) == 0.0);
    }
  }
  // A visited row must carry gradient.
  double used = 0.0;
  for (std::size_t col = 0; col < 4; ++col) used += std::abs(model.embedding.grad(4, col));
  CHECK(used > 0.0);
}

TEST_CASE("batch gradients are the step-weighted mean of per-example gradients") {
  const HyperParams hp = tiny_hyper(12, 4, 3, 5, 5, 6);
  std::mt19937_64 rng(2024);
  const TokenizedExample e1 = random_example(hp, rng, 5, 2);  // 3 steps
  const TokenizedExample e2 = random_example(hp, rng, 4, 4);  // 5 steps

  auto grads_of = [&](const std::vector<TokenizedExample>& exs, double& steps) {
    ModelParams model = ModelParams::init(hp, 500);
    model.zero_grad();
    ForwardCache cache;
    forward_loss({exs}, model, cache);
    backward(cache, model);
    steps = static_cast<double>(cache.step_count);
    std::vector<Matrix> out;
    for (const Parameter* p : model.parameters()) out.push_back(p->grad);
    return out;
  };

  double c1 = 0, c2 = 0, c12 = 0;
  const auto g1 = grads_of({e1}, c1);
  const auto g2 = grads_of({e2}, c2);
  const auto g12 = grads_of({e1, e2}, c12);
  CHECK(c12 == c1 + c2);

  for (std::size_t k = 0; k < g12.size(); ++k) {
    for (std::size_t i = 0; i < g12[k].size(); ++i) {
      const double combined = (c1 * g1[k].data()[i] + c2 * g2[k].data()[i]) / c12;
      CHECK(g12[k].data()[i] == doctest::Approx(combined).epsilon(1e-12));
    }
  }
}
