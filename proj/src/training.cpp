#include <cmath>

#include "ats/model.hpp"
#include "ats/ops.hpp"

namespace ats {
namespace {

// Decorrelates the epoch-shuffle stream from the init stream, which is
// seeded with the raw seed.
constexpr std::uint64_t kShuffleStreamSalt = 0xD1B54A32D192ED03ULL;

std::size_t unpadded_prefix(const std::vector<int>& ids) {
  std::size_t len = 0;
  while (len < ids.size() && ids[len] != Vocabulary::kPadId) ++len;
  return len;
}

}  // namespace

TrainResult train(const std::vector<TokenizedExample>& corpus, const HyperParams& hp,
                  ModelParams& params, const TrainOptions& opts) {
  hp.validate();
  if (corpus.empty()) throw EmptyCorpus("train: empty corpus");

  std::vector<Parameter*> plist = params.parameters();
  AdamState adam(plist, opts.adam);
  std::mt19937_64 shuffle_rng(hp.seed ^ kShuffleStreamSalt);

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.loss_history.reserve(hp.epochs);
  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    deterministic_shuffle(order, shuffle_rng);

    double ce_sum = 0.0;
    std::size_t step_total = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += hp.batch_size) {
      const std::size_t end = std::min(begin + hp.batch_size, order.size());
      TrainingBatch batch;
      batch.examples.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) batch.examples.push_back(corpus[order[i]]);

      params.zero_grad();
      ForwardCache cache;
      const double loss = forward_loss(batch, params, cache);
      if (!std::isfinite(loss)) {
        throw NonFiniteLoss("training loss became non-finite at epoch " +
                            std::to_string(epoch));
      }
      backward(cache, params);
      adam_step(plist, adam);
      if (!params.all_finite()) {
        throw NonFiniteLoss("weights became non-finite at epoch " +
                            std::to_string(epoch));
      }
      ce_sum += loss * static_cast<double>(cache.step_count);
      step_total += cache.step_count;
    }
    const double epoch_loss = ce_sum / static_cast<double>(step_total);
    result.loss_history.push_back(epoch_loss);
    if (opts.progress) opts.progress(epoch, epoch_loss);
  }
  return result;
}

DecodeResult greedy_decode(const std::vector<int>& input_ids, const ModelParams& p,
                           std::size_t max_out_len) {
  const std::size_t len = unpadded_prefix(input_ids);
  const EncoderOutput enc = encode(input_ids, make_mask(len, input_ids.size()), p);

  DecodeResult result;
  Vec state = initial_decoder_state(enc, p);
  int y_prev = Vocabulary::kStartId;
  for (std::size_t step = 0; step < max_out_len && result.ids.size() < max_out_len;
       ++step) {
    DecoderStepOutput out = decoder_step(y_prev, state, enc, p);
    const int best = static_cast<int>(argmax(out.logits));
    if (best == Vocabulary::kEndId) break;
    if (best != Vocabulary::kStartId) {
      result.ids.push_back(best);
      result.trace.rows.push_back(slice(out.attn_weights, 0, enc.input_len));
    }
    state = std::move(out.state);
    y_prev = best;
  }
  return result;
}

}  // namespace ats
