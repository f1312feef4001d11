#include "ats/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ats/csv.hpp"

namespace ats {
namespace {

namespace fs = std::filesystem;

std::string format_double(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open output file: " + path);
  return os;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> reference_tokens(const CleanExample& ex) {
  // Summary tokens without the boundary markers.
  if (ex.summary_tokens.size() <= 2) return {};
  return {ex.summary_tokens.begin() + 1, ex.summary_tokens.end() - 1};
}

}  // namespace

SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  deterministic_shuffle(order, rng);

  // ceil(fraction * n), robust when fraction * n lands on an integer.
  const auto train_count =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));

  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + train_count);
  split.held_out.assign(order.begin() + train_count, order.end());
  return split;
}

PreparedCorpus prepare_corpus(const RunConfig& cfg) {
  const auto raw = load_csv_dataset(cfg.dataset_path, cfg.text_column, cfg.summary_column);

  std::vector<CleanExample> cleaned;
  cleaned.reserve(raw.size());
  for (const RawExample& ex : raw) {
    CleanExample ce;
    ce.article_tokens = clean_text(ex.article, false);
    ce.summary_tokens = clean_text(ex.summary, true);
    if (ce.article_tokens.empty() || ce.summary_tokens.empty()) continue;
    cleaned.push_back(std::move(ce));
  }
  if (cleaned.size() < 2) {
    throw TooFewExamples("need at least 2 usable examples, found " +
                         std::to_string(cleaned.size()));
  }

  const SplitIndices split =
      split_indices(cleaned.size(), cfg.split_fraction, cfg.hyper.seed);
  PreparedCorpus corpus;
  corpus.train.reserve(split.train.size());
  corpus.held_out.reserve(split.held_out.size());
  for (std::size_t i : split.train) corpus.train.push_back(cleaned[i]);
  for (std::size_t i : split.held_out) corpus.held_out.push_back(cleaned[i]);
  return corpus;
}

TrainOutcome cmd_train(const RunConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  PreparedCorpus corpus = prepare_corpus(cfg);

  Vocabulary vocab = Vocabulary::build(corpus.train, cfg.vocab_max_size, cfg.vocab_min_freq);
  HyperParams hp = cfg.hyper;
  hp.vocab_size = vocab.size();
  hp.validate();

  std::vector<TokenizedExample> tokenized;
  tokenized.reserve(corpus.train.size());
  for (const CleanExample& ex : corpus.train) {
    tokenized.push_back(tokenize_example(ex, vocab, hp.max_in_len, hp.max_out_len));
  }

  ModelParams params = ModelParams::init(hp, hp.seed);
  TrainOptions opts;
  opts.adam.lr = cfg.learning_rate;
  opts.progress = progress;
  const TrainResult result = train(tokenized, hp, params, opts);

  fs::create_directories(cfg.output_dir);
  TrainOutcome outcome;
  outcome.loss_history = result.loss_history;
  outcome.final_loss = result.loss_history.empty() ? 0.0 : result.loss_history.back();

  ModelArtifact artifact;
  artifact.hyper = hp;
  artifact.vocab = std::move(vocab);
  artifact.params = std::move(params);
  artifact.meta = {result.loss_history.size(), outcome.final_loss, hp.seed};

  outcome.model_path = (fs::path(cfg.output_dir) / "model.atsm").string();
  save_model(artifact, outcome.model_path);

  outcome.loss_csv_path = (fs::path(cfg.output_dir) / "loss_history.csv").string();
  {
    auto os = open_out(outcome.loss_csv_path);
    os << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
      os << (i + 1) << ',' << format_double(result.loss_history[i]) << '\n';
    }
  }

  outcome.snapshot_path = (fs::path(cfg.output_dir) / "config_snapshot.cfg").string();
  cfg.write_file(outcome.snapshot_path);

  outcome.vocab_path = (fs::path(cfg.output_dir) / "vocab.tsv").string();
  artifact.vocab.write_file(outcome.vocab_path);
  return outcome;
}

DecodeResult summarize_tokens(const ModelArtifact& artifact,
                              const std::vector<std::string>& tokens) {
  const EncodedSeq enc = encode(tokens, artifact.vocab, artifact.hyper.max_in_len);
  DecodeResult result = greedy_decode(enc.ids, artifact.params, artifact.hyper.max_out_len);
  result.trace.input_tokens.reserve(enc.len);
  for (std::size_t j = 0; j < enc.len; ++j) {
    result.trace.input_tokens.push_back(artifact.vocab.token_of(enc.ids[j]));
  }
  result.trace.output_tokens.reserve(result.ids.size());
  for (int id : result.ids) {
    result.trace.output_tokens.push_back(artifact.vocab.token_of(id));
  }
  return result;
}

SummarizeResult cmd_summarize(const std::string& model_path, const std::string& input_text) {
  const ModelArtifact artifact = load_model(model_path);
  const std::vector<std::string> tokens = clean_text(input_text, false);
  if (tokens.empty()) {
    throw EmptyAfterCleaning("input text is empty after cleaning");
  }
  DecodeResult decoded = summarize_tokens(artifact, tokens);
  SummarizeResult out;
  out.summary = join_tokens(decode_ids(decoded.ids, artifact.vocab));
  out.trace = std::move(decoded.trace);
  return out;
}

EvalOutcome cmd_evaluate(const std::string& model_path, const RunConfig& cfg) {
  cfg.validate();
  const ModelArtifact artifact = load_model(model_path);
  const PreparedCorpus corpus = prepare_corpus(cfg);
  if (corpus.held_out.empty()) {
    throw TooFewExamples("the split leaves no held-out examples to evaluate");
  }

  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  pairs.reserve(corpus.held_out.size());
  for (const CleanExample& ex : corpus.held_out) {
    const DecodeResult decoded = summarize_tokens(artifact, ex.article_tokens);
    pairs.emplace_back(decode_ids(decoded.ids, artifact.vocab), reference_tokens(ex));
  }
  EvalOutcome outcome;
  outcome.scores = corpus_scores(pairs);

  fs::create_directories(cfg.output_dir);
  outcome.report_path = (fs::path(cfg.output_dir) / "rouge_report.txt").string();
  {
    auto os = open_out(outcome.report_path);
    os << "pairs evaluated: " << outcome.scores.pair_count << '\n'
       << "ROUGE-1 F1: " << format_double(outcome.scores.rouge1_f1, "%.2f") << '\n'
       << "ROUGE-L F1: " << format_double(outcome.scores.rougeL_f1, "%.2f") << '\n';
  }
  outcome.kv_path = (fs::path(cfg.output_dir) / "rouge_report.kv").string();
  {
    auto os = open_out(outcome.kv_path);
    os << "rouge1_f1 = " << format_double(outcome.scores.rouge1_f1) << '\n'
       << "rougeL_f1 = " << format_double(outcome.scores.rougeL_f1) << '\n'
       << "pair_count = " << outcome.scores.pair_count << '\n';
  }
  return outcome;
}

void write_trace_csv(const AttentionTrace& trace, std::ostream& os) {
  for (const auto& token : trace.input_tokens) os << ',' << token;
  os << '\n';
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    os << trace.output_tokens[i];
    for (double v : trace.rows[i]) os << ',' << format_double(v, "%.9g");
    os << '\n';
  }
}

void write_trace_csv_file(const AttentionTrace& trace, const std::string& path) {
  auto os = open_out(path);
  write_trace_csv(trace, os);
}

AttentionTrace cmd_export_heatmap(const std::string& model_path,
                                  const std::string& input_text,
                                  const std::string& out_path) {
  const ModelArtifact artifact = load_model(model_path);
  const std::vector<std::string> tokens = clean_text(input_text, false);
  if (tokens.empty()) {
    throw EmptyAfterCleaning("input text is empty after cleaning");
  }
  DecodeResult decoded = summarize_tokens(artifact, tokens);
  write_trace_csv_file(decoded.trace, out_path);
  return std::move(decoded.trace);
}

std::string cmd_inspect(const std::string& model_path) {
  const ModelArtifact artifact = load_model(model_path);
  std::ostringstream os;
  os << "format version: " << artifact.version << '\n'
     << "vocab size: " << artifact.vocab.size() << '\n'
     << "embed_dim: " << artifact.hyper.embed_dim << '\n'
     << "enc_hidden: " << artifact.hyper.enc_hidden << " per direction\n"
     << "dec_hidden: " << artifact.hyper.dec_hidden << '\n'
     << "attn_dim: " << artifact.hyper.attn_dim << '\n'
     << "max_in_len: " << artifact.hyper.max_in_len << '\n'
     << "max_out_len: " << artifact.hyper.max_out_len << '\n'
     << "seed: " << artifact.hyper.seed << '\n'
     << "epochs run: " << artifact.meta.epochs_run << '\n'
     << "final loss: " << format_double(artifact.meta.final_loss, "%.6g") << '\n';
  std::size_t total = 0;
  for (const Parameter* p : artifact.params.parameters()) {
    os << "  " << p->name << ": " << p->value.rows() << 'x' << p->value.cols() << '\n';
    total += p->value.size();
  }
  os << "total trainable values: " << total << '\n';
  return os.str();
}

}  // namespace ats
