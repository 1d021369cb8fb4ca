// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_CONFIG_HPP_
#define VOICESEP_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "voicesep/gan.hpp"

namespace voicesep {

// Which channel of a dataset WAV holds which source.
struct ChannelMap {
  int music_channel = 0;
  int vocal_channel = 1;
};

/// Everything that determines a run. The JSON form uses the same field names.
struct RunConfig {
  int sample_rate = 22050;
  int frame_size = 1024;
  int hop = 256;
  GanVariant variant = GanVariant::kVBM;
  TrainingSchedule schedule;
  // Percentile of training mixture magnitudes used as the feature scale.
  double normalization_percentile = 99.9;
  std::uint64_t split_seed = 2017;
  double split_fraction = 0.25;  // share of clips used for training
  std::vector<int> generator_hidden{1024, 1024, 1024};
  std::vector<int> discriminator_hidden{512, 512, 512};
  std::uint64_t generator_seed = 11;
  std::uint64_t discriminator_seed = 13;
  ChannelMap channels;
  int filter_length = 512;  // BSS-Eval distortion filter taps

  Eigen::Index bins() const { return frame_size / 2 + 1; }
  void Validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace voicesep

#endif  // VOICESEP_CONFIG_HPP_
