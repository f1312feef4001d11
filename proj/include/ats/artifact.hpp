#pragma once

#include <cstdint>
#include <string>

#include "ats/model.hpp"
#include "ats/vocabulary.hpp"

namespace ats {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct TrainingMeta {
  std::size_t epochs_run = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
};

/// A trained model and everything needed to run it: hyperparameters,
/// vocabulary, weights and training metadata. See docs/MODEL_FORMAT.md for
/// the container layout.
struct ModelArtifact {
  std::uint32_t version = kModelFormatVersion;
  HyperParams hyper;
  Vocabulary vocab;
  ModelParams params;
  TrainingMeta meta;
};

/// Writes the versioned binary container ("ATSM" magic, u32 version,
/// length-prefixed sections). Deterministic: equal artifacts produce
/// byte-identical files.
void save_model(const ModelArtifact& artifact, const std::string& path);

/// Validates magic, version, section framing and every matrix shape.
/// Throws BadMagic / ModelVersionMismatch / CorruptSection.
ModelArtifact load_model(const std::string& path);

}  // namespace ats
