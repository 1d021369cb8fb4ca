// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_STFT_HPP_
#define VOICESEP_STFT_HPP_

#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "voicesep/audio.hpp"

namespace voicesep {

using ComplexFrames =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// T x F real matrix, one row per frame.
using RealFrames = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kDefaultFrameSize = 1024;
inline constexpr int kDefaultHop = 256;

/// One-sided STFT of a mono signal.
///
/// Framing: the signal is reflect-padded by frame_size/2 on both sides so that
/// frame t is centred on sample t*hop, then zero-extended at the end. The
/// frame count is T = ceil(n / hop) + 1, which covers every input sample with
/// a non-zero window weight. `signal_length` remembers n so the inverse can
/// trim back to the original length.
struct Spectrogram {
  ComplexFrames frames;  // T x (frame_size/2 + 1)
  int frame_size = kDefaultFrameSize;
  int hop = kDefaultHop;
  int sample_rate = 0;
  std::size_t signal_length = 0;

  std::size_t num_frames() const { return static_cast<std::size_t>(frames.rows()); }
  std::size_t num_bins() const { return static_cast<std::size_t>(frames.cols()); }
};

std::size_t StftFrameCount(std::size_t signal_length, int hop);

// Periodic Hann: w[n] = 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> PeriodicHann(int size);

Spectrogram Stft(const AudioClip& clip, int frame_size = kDefaultFrameSize,
                 int hop = kDefaultHop);

/// Weighted overlap-add inverse: each frame is windowed again and the sum is
/// divided by the accumulated squared window. Output has `signal_length`
/// samples.
AudioClip Istft(const Spectrogram& spec);

RealFrames Magnitude(const ComplexFrames& frames);
// Phase in (-pi, pi].
RealFrames Phase(const ComplexFrames& frames);
ComplexFrames Polar(const RealFrames& magnitude, const RealFrames& phase);

// Debug dump: "SPEC", u32 version=1, u32 T, u32 F, u32 frame_size, u32 hop,
// then T*F (f32 re, f32 im) little-endian, row-major by frame. The signal
// length is not stored; a loaded spectrogram assumes (T - 1) * hop.
void SaveSpectrogram(const std::filesystem::path& path, const Spectrogram& spec);
Spectrogram LoadSpectrogram(const std::filesystem::path& path, int sample_rate);

}  // namespace voicesep

#endif  // VOICESEP_STFT_HPP_
