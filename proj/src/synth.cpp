// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "voicesep/error.hpp"
#include "voicesep/rng.hpp"

namespace voicesep {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> VocalPart(const SynthOptions& o, std::size_t n, SplitMix64& rng) {
  std::vector<double> y(n, 0.0);
  for (int p = 0; p < o.partials; ++p) {
    const double freq = rng.Uniform(o.vocal_band_low * 1.02, o.vocal_band_high * 0.98);
    const double amp = rng.Uniform(0.05, 0.15);
    const double vib_rate = rng.Uniform(4.0, 6.0);
    const double vib_depth = 0.005 * freq;
    const double am_rate = rng.Uniform(0.5, 3.0);
    const double am_phase = rng.Uniform(0.0, kTwoPi);
    double phase = rng.Uniform(0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / o.sample_rate;
      const double f = freq + vib_depth * std::sin(kTwoPi * vib_rate * t);
      phase += kTwoPi * f / o.sample_rate;
      const double env = 0.6 + 0.4 * std::sin(kTwoPi * am_rate * t + am_phase);
      y[i] += amp * env * std::sin(phase);
    }
  }
  return y;
}

std::vector<double> MusicPart(const SynthOptions& o, std::size_t n, SplitMix64& rng) {
  std::vector<double> y(n, 0.0);
  const double period = rng.Uniform(0.25, 0.5);
  const double decay = rng.Uniform(0.15, 0.4);
  const double attack = 0.01;
  for (int p = 0; p < o.partials; ++p) {
    const double freq = rng.Uniform(o.music_band_low * 1.02, o.music_band_high * 0.98);
    const double amp = rng.Uniform(0.05, 0.15);
    const double phase = rng.Uniform(0.0, kTwoPi);
    const double offset = rng.Uniform(0.0, period);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / o.sample_rate;
      const double local = std::fmod(t + offset, period);
      // Raised-cosine attack keeps note onsets from splattering into the
      // vocal band.
      const double rise =
          local < attack ? 0.5 - 0.5 * std::cos(std::numbers::pi * local / attack) : 1.0;
      const double env = 0.3 + 0.7 * rise * std::exp(-local / decay);
      y[i] += amp * env * std::sin(kTwoPi * freq * t + phase);
    }
  }
  return y;
}

}  // namespace

AudioClip SynthesizeClip(const SynthOptions& options, int index) {
  if (options.sample_rate <= 0 || !(options.duration_seconds > 0)) {
    Fail(ErrorKind::kParameter, "synthetic clips need a positive rate and duration");
  }
  if (!(options.music_band_high < options.vocal_band_low)) {
    Fail(ErrorKind::kParameter, "synthetic source bands must not overlap");
  }
  const auto n = static_cast<std::size_t>(
      std::lround(options.duration_seconds * options.sample_rate));
  SplitMix64 rng = SplitMix64(options.seed).Fork(static_cast<std::uint64_t>(index));
  std::vector<double> music = MusicPart(options, n, rng);
  std::vector<double> vocal = VocalPart(options, n, rng);
  for (std::size_t i = 0; i < n; ++i) {
    music[i] += options.noise_std * rng.Normal();
    vocal[i] += options.noise_std * rng.Normal();
  }
  return AudioClip::Stereo(std::move(music), std::move(vocal), options.sample_rate);
}

std::vector<std::filesystem::path> WriteSyntheticDataset(const std::filesystem::path& dir,
                                                         const SynthOptions& options) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (int i = 0; i < options.clips; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%03d.wav", i);
    paths.push_back(dir / name);
    WriteWav(paths.back(), SynthesizeClip(options, i));
  }
  return paths;
}

}  // namespace voicesep
