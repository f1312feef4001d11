// atsum: train, run and evaluate the GRU attention summarizer.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ats/commands.hpp"

namespace {

ats::RunConfig resolve_config(const std::string& profile, const std::string& config_path,
                              const std::string& dataset, const std::string& out_dir,
                              bool seed_set, std::uint64_t seed) {
  ats::RunConfig cfg = ats::RunConfig::profile(profile);
  if (!config_path.empty()) {
    // The file starts from the profile's defaults and overrides per key.
    std::ifstream is(config_path, std::ios::binary);
    if (!is) throw ats::ConfigError("cannot open config file: " + config_path);
    std::ostringstream buffer;
    buffer << is.rdbuf();
    cfg = ats::RunConfig::from_text(cfg.to_text() + buffer.str());
  }
  if (!dataset.empty()) cfg.dataset_path = dataset;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed_set) cfg.hyper.seed = seed;
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ats::DataError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abstractive text summarizer (GRU encoder-decoder with attention)"};
  app.require_subcommand(1);

  std::string profile = "paper";
  std::string config_path, dataset, out_dir, model_path, text, input_file, heatmap_out;
  std::string trace_path = "attention_trace.csv";
  std::uint64_t seed = 0;
  bool want_trace = false;
  bool quiet = false;

  auto* train = app.add_subcommand("train", "train a model from a CSV dataset");
  train->add_option("--profile", profile, "hyperparameter profile: paper or toy");
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--data", dataset, "dataset CSV path");
  train->add_option("--out", out_dir, "output directory");
  auto* seed_opt = train->add_option("--seed", seed, "run seed");
  train->add_flag("--quiet", quiet, "suppress per-epoch progress");

  auto* summarize = app.add_subcommand("summarize", "summarize one article");
  summarize->add_option("--model", model_path, "model artifact path")->required();
  summarize->add_option("--text", text, "article text");
  summarize->add_option("--input", input_file, "file containing the article text");
  summarize->add_flag("--trace", want_trace, "also write the attention trace CSV");
  summarize->add_option("--trace-path", trace_path, "where to write the trace CSV");

  auto* evaluate = app.add_subcommand("evaluate", "score the held-out split with ROUGE");
  evaluate->add_option("--model", model_path, "model artifact path")->required();
  evaluate->add_option("--profile", profile, "hyperparameter profile: paper or toy");
  evaluate->add_option("--config", config_path, "config used for the training run");
  evaluate->add_option("--data", dataset, "dataset CSV path");
  evaluate->add_option("--out", out_dir, "output directory");
  auto* eval_seed_opt = evaluate->add_option("--seed", seed, "run seed");

  auto* heatmap = app.add_subcommand("export-heatmap", "write attention weights as CSV");
  heatmap->add_option("--model", model_path, "model artifact path")->required();
  heatmap->add_option("--text", text, "article text");
  heatmap->add_option("--input", input_file, "file containing the article text");
  heatmap->add_option("--out", heatmap_out, "output CSV path")->required();

  auto* inspect = app.add_subcommand("inspect", "print artifact metadata");
  inspect->add_option("--model", model_path, "model artifact path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const ats::RunConfig cfg = resolve_config(profile, config_path, dataset, out_dir,
                                                !seed_opt->empty(), seed);
      ats::ProgressFn progress;
      if (!quiet) {
        const std::size_t total = cfg.hyper.epochs;
        progress = [total](std::size_t epoch, double loss) {
          std::fprintf(stderr, "epoch %zu/%zu  loss %.4f\n", epoch, total, loss);
        };
      }
      const ats::TrainOutcome outcome = ats::cmd_train(cfg, progress);
      std::cout << "model: " << outcome.model_path << '\n'
                << "loss history: " << outcome.loss_csv_path << '\n'
                << "final loss: " << outcome.final_loss << '\n';
    } else if (summarize->parsed()) {
      if (text.empty() && input_file.empty()) {
        throw ats::ConfigError("summarize needs --text or --input");
      }
      if (text.empty()) text = read_text_file(input_file);
      const ats::SummarizeResult result = ats::cmd_summarize(model_path, text);
      std::cout << result.summary << '\n';
      if (want_trace) {
        ats::write_trace_csv_file(result.trace, trace_path);
        std::cerr << "trace: " << trace_path << '\n';
      }
    } else if (evaluate->parsed()) {
      const ats::RunConfig cfg = resolve_config(profile, config_path, dataset, out_dir,
                                                !eval_seed_opt->empty(), seed);
      const ats::EvalOutcome outcome = ats::cmd_evaluate(model_path, cfg);
      std::cout << "pairs evaluated: " << outcome.scores.pair_count << '\n';
      std::printf("ROUGE-1 F1: %.2f\n", outcome.scores.rouge1_f1);
      std::printf("ROUGE-L F1: %.2f\n", outcome.scores.rougeL_f1);
      std::cout << "report: " << outcome.report_path << '\n';
    } else if (heatmap->parsed()) {
      if (text.empty() && input_file.empty()) {
        throw ats::ConfigError("export-heatmap needs --text or --input");
      }
      if (text.empty()) text = read_text_file(input_file);
      ats::cmd_export_heatmap(model_path, text, heatmap_out);
      std::cout << "heatmap: " << heatmap_out << '\n';
    } else if (inspect->parsed()) {
      std::cout << ats::cmd_inspect(model_path);
    }
  } catch (const ats::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ats::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const ats::ModelFormatError& e) {
    std::cerr << "model format error: " << e.what() << '\n';
    return 4;
  } catch (const ats::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
