// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_RUNNER_HPP_
#define VOICESEP_RUNNER_HPP_

#include <filesystem>
#include <optional>
#include <vector>

#include "voicesep/bss_eval.hpp"
#include "voicesep/dataset.hpp"
#include "voicesep/gan.hpp"
#include "voicesep/manifest.hpp"
#include "voicesep/separate.hpp"

namespace voicesep {

struct TrainedModels {
  DenseNet<float> generator;
  std::optional<DenseNet<float>> discriminator;
  double normalization_scale = 1.0;
  std::vector<double> pretrain_curve;
  std::vector<EpochDiagnostics> adversarial;
};

// Caps the discriminator's held-out set; frames are taken at a fixed stride.
inline constexpr std::size_t kMaxHeldoutFrames = 2048;

FrameSet SubsampleFrames(const FrameSet& frames, std::size_t max_rows);

/// Scale from the training clips, pretraining, then (unless pretrain_only)
/// adversarial fine-tuning with D accuracy measured on frames of `heldout`.
TrainedModels TrainModels(const std::vector<ClipRecord>& train,
                          const std::vector<ClipRecord>& heldout, const RunConfig& config,
                          bool pretrain_only);

/// Ingest, split, train and write a run directory: checkpoints, loss curve,
/// adversarial diagnostics and the manifest.
RunManifest TrainRun(const std::filesystem::path& data_dir, const RunConfig& config,
                     const std::filesystem::path& run_dir, bool pretrain_only);

struct LoadedRun {
  RunManifest manifest;
  DenseNet<float> generator;
};
LoadedRun LoadRun(const std::filesystem::path& run_dir);

std::vector<ClipScores> EvaluateModel(const DenseNet<float>& generator,
                                      const std::vector<ClipRecord>& clips, double scale,
                                      const RunConfig& config);

std::vector<ClipScores> EvaluateOracle(const std::vector<ClipRecord>& clips, OracleMask kind,
                                       const RunConfig& config);

ClipScores ScoreSeparation(const ClipRecord& clip, const SeparationResult& separated,
                           int filter_length);

}  // namespace voicesep

#endif  // VOICESEP_RUNNER_HPP_
