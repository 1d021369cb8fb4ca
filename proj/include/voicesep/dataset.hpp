// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_DATASET_HPP_
#define VOICESEP_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "voicesep/audio.hpp"
#include "voicesep/config.hpp"
#include "voicesep/frames.hpp"

namespace voicesep {

// Gain applied to each source when the mono mixture is synthesised.
inline constexpr double kMixGain = 0.5;

/// One song clip: the two sources as stored and their mono mixture
/// kMixGain * (vocal + music). All three share length and rate.
struct ClipRecord {
  std::string id;
  AudioClip vocal;
  AudioClip music;
  AudioClip mixture;

  // The sources as they are present inside the mixture (scaled by kMixGain).
  std::vector<double> VocalImage() const;
  std::vector<double> MusicImage() const;
};

ClipRecord MakeClipRecord(std::string id, const AudioClip& stereo, const ChannelMap& channels);

/// Loads every *.wav in `dir` (sorted by file name), splits channels per
/// `channels`, resamples to `sample_rate` and builds the mixture. Clip ids are
/// file stems. Mono files fail with kIngest naming the file.
std::vector<ClipRecord> Ingest(const std::filesystem::path& dir, const ChannelMap& channels,
                               int sample_rate);

/// Seeded shuffle, then the first ceil(fraction * N) clips train and the rest
/// test. Both halves keep their shuffled order.
std::pair<std::vector<ClipRecord>, std::vector<ClipRecord>> Split(std::vector<ClipRecord> clips,
                                                                  double fraction,
                                                                  std::uint64_t seed);
std::size_t TrainCount(std::size_t clips, double fraction);

/// Magnitude frames of mixture, vocal image and music image, divided by
/// `scale`. Rows are index-aligned across the three.
FrameSet Featurize(const ClipRecord& clip, double scale, int frame_size, int hop);
FrameSet FeaturizeAll(const std::vector<ClipRecord>& clips, double scale, int frame_size,
                      int hop);

/// The given percentile of all mixture STFT magnitudes over `clips`
/// (nearest-rank). Falls back to 1 when that is zero.
double NormalizationScale(const std::vector<ClipRecord>& clips, double percentile,
                          int frame_size, int hop);

}  // namespace voicesep

#endif  // VOICESEP_DATASET_HPP_
