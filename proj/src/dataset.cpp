// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "voicesep/error.hpp"
#include "voicesep/rng.hpp"
#include "voicesep/stft.hpp"

namespace voicesep {
namespace {

std::vector<double> Scaled(const std::vector<double>& x, double gain) {
  std::vector<double> y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [gain](double v) { return gain * v; });
  return y;
}

Matrix<float> ScaledMagnitude(const std::vector<double>& signal, int rate, double scale,
                              int frame_size, int hop) {
  const Spectrogram spec = Stft(AudioClip::Mono(signal, rate), frame_size, hop);
  return (Magnitude(spec.frames) / scale).cast<float>();
}

}  // namespace

std::vector<double> ClipRecord::VocalImage() const { return Scaled(vocal.samples(), kMixGain); }
std::vector<double> ClipRecord::MusicImage() const { return Scaled(music.samples(), kMixGain); }

ClipRecord MakeClipRecord(std::string id, const AudioClip& stereo, const ChannelMap& channels) {
  if (stereo.num_channels() != 2) {
    Fail(ErrorKind::kIngest, id + ": expected 2 channels (music/vocal), found " +
                                 std::to_string(stereo.num_channels()));
  }
  ClipRecord r;
  r.id = std::move(id);
  r.vocal = AudioClip::Mono(stereo.channels[static_cast<std::size_t>(channels.vocal_channel)],
                            stereo.sample_rate);
  r.music = AudioClip::Mono(stereo.channels[static_cast<std::size_t>(channels.music_channel)],
                            stereo.sample_rate);
  std::vector<double> mix(r.vocal.num_frames());
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix[i] = kMixGain * (r.vocal.samples()[i] + r.music.samples()[i]);
  }
  r.mixture = AudioClip::Mono(std::move(mix), stereo.sample_rate);
  return r;
}

std::vector<ClipRecord> Ingest(const std::filesystem::path& dir, const ChannelMap& channels,
                               int sample_rate) {
  if (!std::filesystem::is_directory(dir)) {
    Fail(ErrorKind::kNotFound, "data directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::clog << "warning: no .wav files in " << dir.string() << '\n';
    return {};
  }

  std::vector<ClipRecord> clips;
  clips.reserve(files.size());
  for (const auto& path : files) {
    const AudioClip raw = ReadWav(path);
    if (raw.num_channels() != 2) {
      Fail(ErrorKind::kIngest, path.string() + " has " + std::to_string(raw.num_channels()) +
                                   " channel(s); the dataset layout needs music and vocal "
                                   "channels");
    }
    clips.push_back(
        MakeClipRecord(path.stem().string(), Resample(raw, sample_rate), channels));
  }
  return clips;
}

std::size_t TrainCount(std::size_t clips, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    Fail(ErrorKind::kParameter, "split fraction must lie in (0, 1)");
  }
  // Guard against 0.25 * 1000 landing a hair above 250.
  const double exact = fraction * static_cast<double>(clips);
  const double rounded = std::round(exact);
  const double count = std::abs(exact - rounded) < 1e-9 ? rounded : std::ceil(exact);
  return std::min(clips, static_cast<std::size_t>(count));
}

std::pair<std::vector<ClipRecord>, std::vector<ClipRecord>> Split(std::vector<ClipRecord> clips,
                                                                  double fraction,
                                                                  std::uint64_t seed) {
  const std::size_t train_count = TrainCount(clips.size(), fraction);
  SplitMix64 rng(seed);
  SeededShuffle(clips.begin(), clips.end(), rng);
  std::vector<ClipRecord> test(std::make_move_iterator(clips.begin() +
                                                       static_cast<std::ptrdiff_t>(train_count)),
                               std::make_move_iterator(clips.end()));
  clips.resize(train_count);
  return {std::move(clips), std::move(test)};
}

FrameSet Featurize(const ClipRecord& clip, double scale, int frame_size, int hop) {
  if (!(scale > 0.0)) Fail(ErrorKind::kParameter, "normalisation scale must be positive");
  const int rate = clip.mixture.sample_rate;
  FrameSet out;
  out.mixture = ScaledMagnitude(clip.mixture.samples(), rate, scale, frame_size, hop);
  out.vocal = ScaledMagnitude(clip.VocalImage(), rate, scale, frame_size, hop);
  out.music = ScaledMagnitude(clip.MusicImage(), rate, scale, frame_size, hop);
  if (out.vocal.rows() != out.mixture.rows() || out.music.rows() != out.mixture.rows()) {
    Fail(ErrorKind::kInternal, clip.id + ": frame counts differ across sources");
  }
  for (Eigen::Index t = 0; t < out.mixture.rows(); ++t) {
    out.clip_ids.push_back(clip.id);
    out.frame_indices.push_back(static_cast<int>(t));
  }
  return out;
}

FrameSet FeaturizeAll(const std::vector<ClipRecord>& clips, double scale, int frame_size,
                      int hop) {
  FrameSet all;
  for (const auto& c : clips) all.Append(Featurize(c, scale, frame_size, hop));
  return all;
}

double NormalizationScale(const std::vector<ClipRecord>& clips, double percentile,
                          int frame_size, int hop) {
  std::vector<double> values;
  for (const auto& c : clips) {
    const RealFrames mag = Magnitude(Stft(c.mixture, frame_size, hop).frames);
    values.insert(values.end(), mag.data(), mag.data() + mag.size());
  }
  if (values.empty()) return 1.0;
  const auto rank = static_cast<std::size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(values.size())));
  const std::size_t k = std::clamp<std::size_t>(rank, 1, values.size()) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                   values.end());
  const double v = values[k];
  return v > 0.0 ? v : 1.0;
}

}  // namespace voicesep
