#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ats/optim.hpp"
#include "ats/vocabulary.hpp"

namespace ats {

struct HyperParams {
  std::size_t vocab_size = 0;   // set after the vocabulary is built
  std::size_t embed_dim = 256;
  std::size_t enc_hidden = 512;   // per direction
  std::size_t dec_hidden = 1024;  // must equal 2 * enc_hidden
  std::size_t attn_dim = 1024;
  std::size_t max_in_len = 100;
  std::size_t max_out_len = 20;
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

/// One GRU cell's weights. Input-side matrices are (input x hidden),
/// recurrent matrices (hidden x hidden), biases (1 x hidden).
struct GruWeights {
  Parameter w_z, w_r, w_h;
  Parameter u_z, u_r, u_h;
  Parameter b_z, b_r, b_h;

  GruWeights() = default;
  GruWeights(const std::string& prefix, std::size_t input_dim, std::size_t hidden_dim,
             std::mt19937_64& seeder);
  GruWeights(const std::string& prefix, std::size_t input_dim, std::size_t hidden_dim);

  std::size_t input_dim() const { return w_z.value.rows(); }
  std::size_t hidden_dim() const { return w_z.value.cols(); }
  void collect(std::vector<Parameter*>& out);
};

/// Every trainable weight group of the model. The update rule fixed for
/// this format is h_new = (1 - z) * h_prev + z * h_cand.
struct ModelParams {
  Parameter embedding;  // V x E, shared by encoder and decoder inputs
  GruWeights enc_fwd;   // E -> H_e
  GruWeights enc_bwd;   // E -> H_e
  GruWeights dec;       // (E + 2H_e) -> H_d
  Parameter attn_w;     // A x (H_d + 2H_e)
  Parameter attn_v;     // 1 x A
  Parameter init_w;     // H_e x H_d, decoder start state from the backward annotation
  Parameter init_b;     // 1 x H_d
  Parameter out_w;      // (H_d + 2H_e + E) x V
  Parameter out_b;      // 1 x V

  static ModelParams init(const HyperParams& hp, std::uint64_t seed);
  static ModelParams zeros(const HyperParams& hp);  // shape scaffold for loading

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  void zero_grad();
  bool all_finite() const;

  std::size_t vocab_size() const { return embedding.value.rows(); }
  std::size_t embed_dim() const { return embedding.value.cols(); }
  std::size_t enc_hidden() const { return enc_fwd.hidden_dim(); }
  std::size_t dec_hidden() const { return dec.hidden_dim(); }
  std::size_t attn_dim() const { return attn_w.value.rows(); }
};

/// z = sigmoid(Wz^T x + Uz^T h + bz); r likewise; h_cand = tanh(Wh^T x +
/// Uh^T (r*h) + bh); h_new = (1 - z)*h + z*h_cand.
Vec gru_cell(const GruWeights& w, const Vec& x, const Vec& h_prev);

/// Per-position annotations [forward_state; backward_state], zero on
/// masked (pad) positions. input_len counts the unmasked prefix.
struct EncoderOutput {
  std::vector<Vec> annotations;
  std::vector<std::uint8_t> mask;
  std::size_t input_len = 0;
};

EncoderOutput encode(const std::vector<int>& input_ids,
                     const std::vector<std::uint8_t>& mask, const ModelParams& p);

struct AttentionResult {
  Vec weights;  // one entry per annotation; exactly 0 on masked positions
  Vec context;  // attention-weighted sum of annotations
};

/// Additive attention: e_j = v^T tanh(W [s_prev; h_j]) over unmasked j,
/// softmax to weights, context = sum_j alpha_j h_j.
AttentionResult attention(const Vec& s_prev, const EncoderOutput& enc,
                          const ModelParams& p);

struct DecoderStepOutput {
  Vec state;
  Vec context;
  Vec attn_weights;
  Vec logits;
};

/// One decode step: attention with s_prev, GRU over [embed(y_prev); context],
/// logits from [state; context; embed(y_prev)].
DecoderStepOutput decoder_step(int y_prev_id, const Vec& s_prev,
                               const EncoderOutput& enc, const ModelParams& p);

/// Decoder start state: tanh-affine map of the backward annotation at the
/// first position (the backward GRU's summary of the whole input).
Vec initial_decoder_state(const EncoderOutput& enc, const ModelParams& p);

std::vector<std::uint8_t> make_mask(std::size_t len, std::size_t total);

// ---------------------------------------------------------------------------
// Training

struct TrainingBatch {
  std::vector<TokenizedExample> examples;
};

namespace detail {

struct GruCellCache {
  Vec x, h_prev, z, r, rh, h_cand;
};

struct DecoderStepCache {
  int y_prev = 0;
  int target = 0;
  Vec alpha;
  GruCellCache gru;
  Vec out_concat;
  Vec dlogits;  // row of the batch cross-entropy gradient
};

struct ExampleCache {
  std::vector<int> input_ids;
  std::size_t input_len = 0;
  std::vector<GruCellCache> fwd, bwd;  // encoder cells over the unmasked prefix
  std::vector<Vec> annotations;        // length input_len
  Vec s0;
  std::vector<Vec> states;  // s_0 .. s_S
  std::vector<DecoderStepCache> steps;
};

// Kernel-level entry points, shared with the gradient-check tests.
Vec gru_cell_forward(const GruWeights& w, const Vec& x, const Vec& h_prev,
                     GruCellCache* cache);
Vec gru_cell_backward(GruWeights& w, const GruCellCache& cache, const Vec& dh_new,
                      Vec& dh_prev);
void attention_backward(ModelParams& p, const Vec& s_prev,
                        const std::vector<Vec>& annotations, const Vec& alpha,
                        const Vec& dcontext, Vec& ds_prev, std::vector<Vec>& dann);

}  // namespace detail

/// Everything backward() needs, built by forward_loss().
struct ForwardCache {
  std::vector<detail::ExampleCache> examples;
  double loss = 0.0;
  std::size_t step_count = 0;  // non-pad target steps across the batch
};

/// Teacher-forced forward pass over a batch; loss is the mean cross
/// entropy over non-pad target positions. Throws EmptyMask when the batch
/// has no such position.
double forward_loss(const TrainingBatch& batch, const ModelParams& p, ForwardCache& cache);

/// Backpropagation through the decoder steps, attention and both encoder
/// directions; accumulates into every Parameter's grad.
void backward(const ForwardCache& cache, ModelParams& p);

struct TrainOptions {
  AdamConfig adam;
  std::function<void(std::size_t epoch, double mean_loss)> progress;
};

struct TrainResult {
  std::vector<double> loss_history;  // per-epoch mean loss
};

/// Seeded epoch shuffle, then per batch: zero grads, forward, backward,
/// Adam. Aborts with NonFiniteLoss if the loss or any weight stops being
/// finite.
TrainResult train(const std::vector<TokenizedExample>& corpus, const HyperParams& hp,
                  ModelParams& params, const TrainOptions& opts = {});

// ---------------------------------------------------------------------------
// Decoding

/// Attention rows for one decoded sequence; row j is the weight the j-th
/// emitted token placed on each unmasked input position.
struct AttentionTrace {
  std::vector<Vec> rows;
  std::vector<std::string> input_tokens;
  std::vector<std::string> output_tokens;
};

struct DecodeResult {
  std::vector<int> ids;  // emitted tokens, start/end excluded
  AttentionTrace trace;
};

/// Greedy argmax decoding from the start token until the end token or
/// max_out_len. Trace rows are recorded for emitted tokens only.
DecodeResult greedy_decode(const std::vector<int>& input_ids, const ModelParams& p,
                           std::size_t max_out_len);

}  // namespace ats
