// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_SYNTH_HPP_
#define VOICESEP_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "voicesep/audio.hpp"

namespace voicesep {

/// Two-source test material with disjoint spectral bands: a "vocal" of
/// vibrato partials in the upper band and "music" of plucked partials in the
/// lower band, each with a little white noise of its own.
struct SynthOptions {
  int clips = 64;
  int sample_rate = 22050;
  double duration_seconds = 1.0;
  int partials = 3;
  double music_band_low = 110.0, music_band_high = 700.0;
  double vocal_band_low = 1200.0, vocal_band_high = 4000.0;
  double noise_std = 0.002;
  std::uint64_t seed = 42;
};

// Stereo clip: channel 0 music, channel 1 vocal.
AudioClip SynthesizeClip(const SynthOptions& options, int index);

// Writes synth_000.wav ... into `dir` (created if needed); returns the paths.
std::vector<std::filesystem::path> WriteSyntheticDataset(const std::filesystem::path& dir,
                                                         const SynthOptions& options);

}  // namespace voicesep

#endif  // VOICESEP_SYNTH_HPP_
