#pragma once

#include <string>

#include "ats/model.hpp"

namespace ats {

/// Everything a run needs, loadable from and serializable to a
/// human-readable key = value file (lossless round trip).
struct RunConfig {
  std::string dataset_path;
  std::string text_column = "text";
  std::string summary_column = "summary";
  HyperParams hyper;  // vocab_size stays 0 here; it is derived at train time
  std::size_t vocab_max_size = 20000;
  std::size_t vocab_min_freq = 2;
  double split_fraction = 0.8;
  double learning_rate = 1e-3;
  std::string output_dir = ".";

  void validate() const;  // throws ConfigError
  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
  void write_file(const std::string& path) const;

  /// "paper": the full-scale defaults. "toy": a desk-scale profile that
  /// trains in minutes.
  static RunConfig profile(const std::string& name);
};

}  // namespace ats
