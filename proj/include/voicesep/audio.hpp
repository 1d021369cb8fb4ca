// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_AUDIO_HPP_
#define VOICESEP_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

namespace voicesep {

/// A sampled waveform, stored planar (one vector per channel).
/// Samples are nominally in [-1, 1]; only finiteness is enforced.
struct AudioClip {
  int sample_rate = 0;
  std::vector<std::vector<double>> channels;

  static AudioClip Mono(std::vector<double> samples, int sample_rate);
  static AudioClip Stereo(std::vector<double> left, std::vector<double> right,
                          int sample_rate);

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_frames() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  double duration_seconds() const {
    return static_cast<double>(num_frames()) / sample_rate;
  }
  const std::vector<double>& samples(std::size_t channel = 0) const {
    return channels.at(channel);
  }

  bool operator==(const AudioClip&) const = default;
};

// Throws kParameter/kInput unless the clip has a positive rate, 1 or 2
// equal-length channels and finite samples.
void ValidateClip(const AudioClip& clip);

// Reads RIFF/WAVE PCM16 or IEEE float32 with 1 or 2 channels. PCM16 codes are
// divided by 32768.
AudioClip ReadWav(const std::filesystem::path& path);

// Writes PCM16. Samples are clipped to the representable code range, so
// anything >= 1 becomes 32767/32768.
void WriteWav(const std::filesystem::path& path, const AudioClip& clip);

/// Windowed-sinc polyphase rate conversion (Kaiser window, 64 taps per
/// phase). The conversion ratio is reduced to target/source = up/down with
/// gcd arithmetic; the output holds ceil(n * up / down) samples.
AudioClip Resample(const AudioClip& clip, int target_rate);

// Channel sum scaled by 0.5.
AudioClip DownmixToMono(const AudioClip& clip);

}  // namespace voicesep

#endif  // VOICESEP_AUDIO_HPP_
