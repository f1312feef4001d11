#include "ats/model.hpp"

#include <cmath>

#include "ats/ops.hpp"

namespace ats {
namespace {

void check_token_id(int id, std::size_t vocab_size) {
  if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
    throw IdOutOfRange("token id " + std::to_string(id) +
                       " out of range for vocabulary of size " +
                       std::to_string(vocab_size));
  }
}

Vec embedding_row(const ModelParams& p, int id) {
  check_token_id(id, p.vocab_size());
  return row_of(p.embedding.value, static_cast<std::size_t>(id));
}

std::size_t checked_prefix_len(const std::vector<std::uint8_t>& mask) {
  std::size_t len = 0;
  while (len < mask.size() && mask[len]) ++len;
  for (std::size_t i = len; i < mask.size(); ++i) {
    if (mask[i]) throw ShapeMismatch("mask must be a contiguous unmasked prefix");
  }
  return len;
}

}  // namespace

void HyperParams::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(vocab_size, "vocab_size");
  positive(embed_dim, "embed_dim");
  positive(enc_hidden, "enc_hidden");
  positive(dec_hidden, "dec_hidden");
  positive(attn_dim, "attn_dim");
  positive(max_in_len, "max_in_len");
  positive(batch_size, "batch_size");
  if (dec_hidden != 2 * enc_hidden) {
    throw ConfigError("dec_hidden must equal 2 * enc_hidden");
  }
  if (max_out_len < 2) {
    throw ConfigError("max_out_len must fit the start and end markers");
  }
}

GruWeights::GruWeights(const std::string& prefix, std::size_t input_dim,
                       std::size_t hidden_dim, std::mt19937_64& seeder)
    : w_z(prefix + ".w_z", glorot_init(input_dim, hidden_dim, seeder())),
      w_r(prefix + ".w_r", glorot_init(input_dim, hidden_dim, seeder())),
      w_h(prefix + ".w_h", glorot_init(input_dim, hidden_dim, seeder())),
      u_z(prefix + ".u_z", glorot_init(hidden_dim, hidden_dim, seeder())),
      u_r(prefix + ".u_r", glorot_init(hidden_dim, hidden_dim, seeder())),
      u_h(prefix + ".u_h", glorot_init(hidden_dim, hidden_dim, seeder())),
      b_z(prefix + ".b_z", Matrix(1, hidden_dim)),
      b_r(prefix + ".b_r", Matrix(1, hidden_dim)),
      b_h(prefix + ".b_h", Matrix(1, hidden_dim)) {}

GruWeights::GruWeights(const std::string& prefix, std::size_t input_dim,
                       std::size_t hidden_dim)
    : w_z(prefix + ".w_z", Matrix(input_dim, hidden_dim)),
      w_r(prefix + ".w_r", Matrix(input_dim, hidden_dim)),
      w_h(prefix + ".w_h", Matrix(input_dim, hidden_dim)),
      u_z(prefix + ".u_z", Matrix(hidden_dim, hidden_dim)),
      u_r(prefix + ".u_r", Matrix(hidden_dim, hidden_dim)),
      u_h(prefix + ".u_h", Matrix(hidden_dim, hidden_dim)),
      b_z(prefix + ".b_z", Matrix(1, hidden_dim)),
      b_r(prefix + ".b_r", Matrix(1, hidden_dim)),
      b_h(prefix + ".b_h", Matrix(1, hidden_dim)) {}

void GruWeights::collect(std::vector<Parameter*>& out) {
  for (Parameter* p : {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h, &b_z, &b_r, &b_h}) {
    out.push_back(p);
  }
}

ModelParams ModelParams::init(const HyperParams& hp, std::uint64_t seed) {
  hp.validate();
  std::mt19937_64 seeder(seed);
  ModelParams p;
  p.embedding = Parameter("embedding", glorot_init(hp.vocab_size, hp.embed_dim, seeder()));
  p.enc_fwd = GruWeights("enc_fwd", hp.embed_dim, hp.enc_hidden, seeder);
  p.enc_bwd = GruWeights("enc_bwd", hp.embed_dim, hp.enc_hidden, seeder);
  p.dec = GruWeights("dec", hp.embed_dim + 2 * hp.enc_hidden, hp.dec_hidden, seeder);
  p.attn_w = Parameter(
      "attn_w", glorot_init(hp.attn_dim, hp.dec_hidden + 2 * hp.enc_hidden, seeder()));
  p.attn_v = Parameter("attn_v", glorot_init(1, hp.attn_dim, seeder()));
  p.init_w = Parameter("init_w", glorot_init(hp.enc_hidden, hp.dec_hidden, seeder()));
  p.init_b = Parameter("init_b", Matrix(1, hp.dec_hidden));
  p.out_w = Parameter(
      "out_w", glorot_init(hp.dec_hidden + 2 * hp.enc_hidden + hp.embed_dim,
                           hp.vocab_size, seeder()));
  p.out_b = Parameter("out_b", Matrix(1, hp.vocab_size));
  return p;
}

ModelParams ModelParams::zeros(const HyperParams& hp) {
  hp.validate();
  ModelParams p;
  p.embedding = Parameter("embedding", Matrix(hp.vocab_size, hp.embed_dim));
  p.enc_fwd = GruWeights("enc_fwd", hp.embed_dim, hp.enc_hidden);
  p.enc_bwd = GruWeights("enc_bwd", hp.embed_dim, hp.enc_hidden);
  p.dec = GruWeights("dec", hp.embed_dim + 2 * hp.enc_hidden, hp.dec_hidden);
  p.attn_w = Parameter("attn_w", Matrix(hp.attn_dim, hp.dec_hidden + 2 * hp.enc_hidden));
  p.attn_v = Parameter("attn_v", Matrix(1, hp.attn_dim));
  p.init_w = Parameter("init_w", Matrix(hp.enc_hidden, hp.dec_hidden));
  p.init_b = Parameter("init_b", Matrix(1, hp.dec_hidden));
  p.out_w = Parameter(
      "out_w", Matrix(hp.dec_hidden + 2 * hp.enc_hidden + hp.embed_dim, hp.vocab_size));
  p.out_b = Parameter("out_b", Matrix(1, hp.vocab_size));
  return p;
}

std::vector<Parameter*> ModelParams::parameters() {
  std::vector<Parameter*> out;
  out.reserve(34);
  out.push_back(&embedding);
  enc_fwd.collect(out);
  enc_bwd.collect(out);
  dec.collect(out);
  for (Parameter* p : {&attn_w, &attn_v, &init_w, &init_b, &out_w, &out_b}) {
    out.push_back(p);
  }
  return out;
}

std::vector<const Parameter*> ModelParams::parameters() const {
  auto mutable_list = const_cast<ModelParams*>(this)->parameters();
  return {mutable_list.begin(), mutable_list.end()};
}

void ModelParams::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

bool ModelParams::all_finite() const {
  for (const Parameter* p : parameters()) {
    if (!p->value.all_finite()) return false;
  }
  return true;
}

namespace detail {

Vec gru_cell_forward(const GruWeights& w, const Vec& x, const Vec& h_prev,
                     GruCellCache* cache) {
  if (x.size() != w.input_dim() || h_prev.size() != w.hidden_dim()) {
    throw ShapeMismatch("gru_cell: input/state sizes do not match the weights");
  }
  Vec az = matvec_t(w.w_z.value, x);
  axpy(az, 1.0, matvec_t(w.u_z.value, h_prev));
  axpy(az, 1.0, row_of(w.b_z.value, 0));
  Vec z = sigmoid_vec(az);

  Vec ar = matvec_t(w.w_r.value, x);
  axpy(ar, 1.0, matvec_t(w.u_r.value, h_prev));
  axpy(ar, 1.0, row_of(w.b_r.value, 0));
  Vec r = sigmoid_vec(ar);

  Vec rh = vmul(r, h_prev);
  Vec ah = matvec_t(w.w_h.value, x);
  axpy(ah, 1.0, matvec_t(w.u_h.value, rh));
  axpy(ah, 1.0, row_of(w.b_h.value, 0));
  Vec h_cand = tanh_vec(ah);

  Vec h_new(h_prev.size());
  for (std::size_t i = 0; i < h_new.size(); ++i) {
    h_new[i] = (1.0 - z[i]) * h_prev[i] + z[i] * h_cand[i];
  }
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->rh = std::move(rh);
    cache->h_cand = std::move(h_cand);
  }
  return h_new;
}

// Encoder with optional per-cell caching for the backward pass.
EncoderOutput run_encoder(const std::vector<int>& input_ids,
                          const std::vector<std::uint8_t>& mask, const ModelParams& p,
                          ExampleCache* cache) {
  if (input_ids.size() != mask.size()) {
    throw ShapeMismatch("encode: ids and mask lengths differ");
  }
  const std::size_t len = checked_prefix_len(mask);
  const std::size_t h = p.enc_hidden();

  EncoderOutput out;
  out.mask = mask;
  out.input_len = len;
  out.annotations.assign(input_ids.size(), Vec(2 * h, 0.0));

  std::vector<Vec> fwd(len), bwd(len);
  if (cache) {
    cache->fwd.resize(len);
    cache->bwd.resize(len);
  }
  Vec state(h, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    state = gru_cell_forward(p.enc_fwd, embedding_row(p, input_ids[t]), state,
                             cache ? &cache->fwd[t] : nullptr);
    fwd[t] = state;
  }
  state.assign(h, 0.0);
  for (std::size_t t = len; t-- > 0;) {
    state = gru_cell_forward(p.enc_bwd, embedding_row(p, input_ids[t]), state,
                             cache ? &cache->bwd[t] : nullptr);
    bwd[t] = state;
  }
  for (std::size_t t = 0; t < len; ++t) {
    out.annotations[t] = concat(fwd[t], bwd[t]);
  }
  if (cache) {
    cache->input_ids = input_ids;
    cache->input_len = len;
    cache->annotations.assign(out.annotations.begin(), out.annotations.begin() + len);
  }
  return out;
}

}  // namespace detail

Vec gru_cell(const GruWeights& w, const Vec& x, const Vec& h_prev) {
  return detail::gru_cell_forward(w, x, h_prev, nullptr);
}

std::vector<std::uint8_t> make_mask(std::size_t len, std::size_t total) {
  std::vector<std::uint8_t> mask(total, 0);
  for (std::size_t i = 0; i < len && i < total; ++i) mask[i] = 1;
  return mask;
}

EncoderOutput encode(const std::vector<int>& input_ids,
                     const std::vector<std::uint8_t>& mask, const ModelParams& p) {
  return detail::run_encoder(input_ids, mask, p, nullptr);
}

AttentionResult attention(const Vec& s_prev, const EncoderOutput& enc,
                          const ModelParams& p) {
  Vec scores(enc.annotations.size(), 0.0);
  for (std::size_t j = 0; j < enc.annotations.size(); ++j) {
    if (!enc.mask[j]) continue;
    const Vec q = matvec(p.attn_w.value, concat(s_prev, enc.annotations[j]));
    double e = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
      e += p.attn_v.value(0, a) * std::tanh(q[a]);
    }
    scores[j] = e;
  }
  AttentionResult res;
  res.weights = masked_softmax(scores, enc.mask);
  res.context.assign(2 * p.enc_hidden(), 0.0);
  for (std::size_t j = 0; j < enc.annotations.size(); ++j) {
    if (res.weights[j] != 0.0) axpy(res.context, res.weights[j], enc.annotations[j]);
  }
  return res;
}

DecoderStepOutput decoder_step(int y_prev_id, const Vec& s_prev,
                               const EncoderOutput& enc, const ModelParams& p) {
  const Vec emb = embedding_row(p, y_prev_id);
  AttentionResult att = attention(s_prev, enc, p);

  DecoderStepOutput out;
  out.state = gru_cell(p.dec, concat(emb, att.context), s_prev);
  out.logits = matvec_t(p.out_w.value, concat(out.state, att.context, emb));
  axpy(out.logits, 1.0, row_of(p.out_b.value, 0));
  out.context = std::move(att.context);
  out.attn_weights = std::move(att.weights);
  return out;
}

Vec initial_decoder_state(const EncoderOutput& enc, const ModelParams& p) {
  if (enc.input_len == 0) {
    throw EmptyAttentionSupport("initial_decoder_state: input has no unmasked position");
  }
  const std::size_t h = p.enc_hidden();
  const Vec bwd0 = slice(enc.annotations[0], h, 2 * h);
  Vec s0 = matvec_t(p.init_w.value, bwd0);
  axpy(s0, 1.0, row_of(p.init_b.value, 0));
  return tanh_vec(s0);
}

double forward_loss(const TrainingBatch& batch, const ModelParams& p,
                    ForwardCache& cache) {
  cache.examples.clear();
  cache.examples.reserve(batch.examples.size());

  std::vector<Vec> logit_rows;
  std::vector<int> targets;

  for (const TokenizedExample& ex : batch.examples) {
    detail::ExampleCache ec;
    EncoderOutput enc = detail::run_encoder(
        ex.input_ids, make_mask(ex.input_len, ex.input_ids.size()), p, &ec);

    ec.s0 = initial_decoder_state(enc, p);
    ec.states.push_back(ec.s0);

    const std::size_t steps = ex.target_len >= 2 ? ex.target_len - 1 : 0;
    for (std::size_t i = 0; i < steps; ++i) {
      detail::DecoderStepCache sc;
      sc.y_prev = ex.target_ids[i];
      sc.target = ex.target_ids[i + 1];

      const Vec emb = embedding_row(p, sc.y_prev);
      AttentionResult att = attention(ec.states.back(), enc, p);
      sc.alpha = std::move(att.weights);

      Vec state =
          detail::gru_cell_forward(p.dec, concat(emb, att.context), ec.states.back(), &sc.gru);
      sc.out_concat = concat(state, att.context, emb);
      Vec logits = matvec_t(p.out_w.value, sc.out_concat);
      axpy(logits, 1.0, row_of(p.out_b.value, 0));

      ec.states.push_back(std::move(state));
      logit_rows.push_back(std::move(logits));
      targets.push_back(sc.target);
      ec.steps.push_back(std::move(sc));
    }
    cache.examples.push_back(std::move(ec));
  }

  // One batch-level cross entropy over every teacher-forced step.
  Matrix logits(logit_rows.size(), p.vocab_size());
  for (std::size_t i = 0; i < logit_rows.size(); ++i) {
    std::copy(logit_rows[i].begin(), logit_rows[i].end(), logits.row_span(i).begin());
  }
  CeResult ce =
      sparse_ce_loss(logits, targets, std::vector<std::uint8_t>(targets.size(), 1));

  std::size_t row = 0;
  for (auto& ec : cache.examples) {
    for (auto& sc : ec.steps) {
      sc.dlogits = row_of(ce.dlogits, row++);
    }
  }
  cache.loss = ce.loss;
  cache.step_count = ce.count;
  return ce.loss;
}

}  // namespace ats
