#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ats/artifact.hpp"
#include "ats/rouge.hpp"
#include "ats/run_config.hpp"

namespace ats {

/// Cleaned corpus split into train and held-out parts by shuffled order
/// under the run seed.
struct PreparedCorpus {
  std::vector<CleanExample> train;
  std::vector<CleanExample> held_out;
};

PreparedCorpus prepare_corpus(const RunConfig& cfg);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> held_out;
};

/// Seeded shuffle of 0..n-1; the first ceil(fraction*n) indices train.
SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed);

struct TrainOutcome {
  std::string model_path;
  std::string loss_csv_path;
  std::string snapshot_path;
  std::string vocab_path;
  std::vector<double> loss_history;
  double final_loss = 0.0;
};

using ProgressFn = std::function<void(std::size_t epoch, double mean_loss)>;

/// Ingests the dataset, builds the vocabulary on the training split,
/// trains, and writes the artifact plus loss history, config snapshot and
/// vocabulary files into cfg.output_dir.
TrainOutcome cmd_train(const RunConfig& cfg, const ProgressFn& progress = {});

struct SummarizeResult {
  std::string summary;
  AttentionTrace trace;
};

/// Cleans the input with the artifact's pipeline settings, greedy-decodes,
/// and detokenizes with single spaces. Throws EmptyAfterCleaning.
SummarizeResult cmd_summarize(const std::string& model_path, const std::string& input_text);

struct EvalOutcome {
  CorpusRouge scores;
  std::string report_path;
  std::string kv_path;
};

/// Decodes every held-out article (split recomputed from seed + config)
/// and reports corpus ROUGE-1/ROUGE-L F1.
EvalOutcome cmd_evaluate(const std::string& model_path, const RunConfig& cfg);

/// Attention heatmap as CSV: header row = input tokens, first column =
/// output tokens, cells = attention weights.
AttentionTrace cmd_export_heatmap(const std::string& model_path,
                                  const std::string& input_text,
                                  const std::string& out_path);

std::string cmd_inspect(const std::string& model_path);

void write_trace_csv(const AttentionTrace& trace, std::ostream& os);
void write_trace_csv_file(const AttentionTrace& trace, const std::string& path);

/// Runs greedy decoding for already-cleaned tokens and labels the trace
/// with the encoder-side and decoded tokens.
DecodeResult summarize_tokens(const ModelArtifact& artifact,
                              const std::vector<std::string>& tokens);

}  // namespace ats
