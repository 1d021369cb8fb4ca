// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/runner.hpp"

#include <fstream>
#include <iostream>

#include "voicesep/checkpoint.hpp"
#include "voicesep/error.hpp"

namespace voicesep {

FrameSet SubsampleFrames(const FrameSet& frames, std::size_t max_rows) {
  if (frames.size() <= max_rows) return frames;
  std::vector<Eigen::Index> rows;
  const double stride = static_cast<double>(frames.size()) / static_cast<double>(max_rows);
  for (std::size_t i = 0; i < max_rows; ++i) {
    rows.push_back(static_cast<Eigen::Index>(static_cast<double>(i) * stride));
  }
  return frames.Rows(rows);
}

TrainedModels TrainModels(const std::vector<ClipRecord>& train,
                          const std::vector<ClipRecord>& heldout, const RunConfig& config,
                          bool pretrain_only) {
  config.Validate();
  if (train.empty()) Fail(ErrorKind::kParameter, "no training clips");
  TrainedModels out;
  out.normalization_scale = NormalizationScale(train, config.normalization_percentile,
                                               config.frame_size, config.hop);
  const FrameSet train_frames =
      FeaturizeAll(train, out.normalization_scale, config.frame_size, config.hop);

  out.generator = MakeGenerator(config.bins(), config.generator_hidden, config.generator_seed);
  out.pretrain_curve = Pretrain(out.generator, train_frames, config.schedule);
  if (pretrain_only || config.schedule.adversarial_epochs == 0) return out;

  const std::vector<ClipRecord>& held = heldout.empty() ? train : heldout;
  const FrameSet held_frames = SubsampleFrames(
      FeaturizeAll(held, out.normalization_scale, config.frame_size, config.hop),
      kMaxHeldoutFrames);
  out.discriminator = MakeDiscriminator(config.variant, config.bins(),
                                        config.discriminator_hidden, config.discriminator_seed);
  out.adversarial = AdversarialTrain(out.generator, *out.discriminator, config.variant,
                                     train_frames, held_frames, config.schedule);
  return out;
}

namespace {

std::vector<std::string> Ids(const std::vector<ClipRecord>& clips) {
  std::vector<std::string> ids;
  for (const auto& c : clips) ids.push_back(c.id);
  return ids;
}

}  // namespace

RunManifest TrainRun(const std::filesystem::path& data_dir, const RunConfig& config,
                     const std::filesystem::path& run_dir, bool pretrain_only) {
  config.Validate();
  auto [train, test] =
      Split(Ingest(data_dir, config.channels, config.sample_rate), config.split_fraction,
            config.split_seed);
  const TrainedModels models = TrainModels(train, test, config, pretrain_only);

  std::filesystem::create_directories(run_dir);
  RunManifest manifest;
  manifest.config = config;
  manifest.normalization_scale = models.normalization_scale;
  manifest.pretrained = true;
  manifest.adversarial_epochs_completed = static_cast<int>(models.adversarial.size());
  manifest.train_ids = Ids(train);
  manifest.test_ids = Ids(test);

  SaveCheckpoint(run_dir / kGeneratorFile, models.generator);
  RecordChecksum(manifest, run_dir, kGeneratorFile);
  if (models.discriminator) {
    SaveCheckpoint(run_dir / kDiscriminatorFile, *models.discriminator);
    RecordChecksum(manifest, run_dir, kDiscriminatorFile);
    WriteDiagnosticsCsv(run_dir / "diagnostics.csv", models.adversarial);
  }
  {
    std::ofstream curve(run_dir / "pretrain_loss.csv", std::ios::trunc);
    curve << "epoch,loss\n";
    curve.precision(9);
    for (std::size_t e = 0; e < models.pretrain_curve.size(); ++e) {
      curve << e << ',' << models.pretrain_curve[e] << '\n';
    }
  }
  SaveManifest(run_dir, manifest);
  return manifest;
}

LoadedRun LoadRun(const std::filesystem::path& run_dir) {
  LoadedRun run;
  run.manifest = LoadManifest(run_dir);
  if (!run.manifest.checksums.contains(kGeneratorFile)) {
    Fail(ErrorKind::kCheckpoint, "run " + run_dir.string() + " has no generator checkpoint");
  }
  run.generator = LoadCheckpoint(run_dir / kGeneratorFile);
  const Eigen::Index bins = run.manifest.config.bins();
  if (run.generator.input_width() != bins || run.generator.output_width() != 2 * bins) {
    Fail(ErrorKind::kCheckpoint, "generator width does not match the run's frame size");
  }
  return run;
}

ClipScores ScoreSeparation(const ClipRecord& clip, const SeparationResult& separated,
                           int filter_length) {
  const std::vector<std::vector<double>> estimates{separated.vocal.samples(),
                                                   separated.music.samples()};
  const std::vector<std::vector<double>> references{clip.VocalImage(), clip.MusicImage()};
  return EvaluateClip(clip.id, clip.mixture.duration_seconds(), estimates, references,
                      filter_length);
}

std::vector<ClipScores> EvaluateModel(const DenseNet<float>& generator,
                                      const std::vector<ClipRecord>& clips, double scale,
                                      const RunConfig& config) {
  std::vector<ClipScores> scores;
  for (const auto& clip : clips) {
    scores.push_back(ScoreSeparation(
        clip, Separate(generator, clip.mixture, scale, config.frame_size, config.hop),
        config.filter_length));
  }
  return scores;
}

std::vector<ClipScores> EvaluateOracle(const std::vector<ClipRecord>& clips, OracleMask kind,
                                       const RunConfig& config) {
  std::vector<ClipScores> scores;
  for (const auto& clip : clips) {
    scores.push_back(ScoreSeparation(
        clip, SeparateWithOracle(clip, kind, config.frame_size, config.hop),
        config.filter_length));
  }
  return scores;
}

}  // namespace voicesep
