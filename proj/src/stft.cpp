// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/stft.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

void CheckParameters(int frame_size, int hop) {
  if (frame_size <= 0 || hop <= 0) {
    Fail(ErrorKind::kParameter, "frame size and hop must be positive");
  }
  if (frame_size < hop) {
    Fail(ErrorKind::kParameter, "frame size " + std::to_string(frame_size) +
                                    " is smaller than hop " + std::to_string(hop));
  }
  if (!std::has_single_bit(static_cast<unsigned>(frame_size))) {
    Fail(ErrorKind::kParameter,
         "frame size must be a power of two, got " + std::to_string(frame_size));
  }
  if (frame_size % hop != 0) {
    Fail(ErrorKind::kParameter, "hop must divide the frame size");
  }
}

// Index into x after symmetric reflection without edge repeat
// (… x2 x1 | x0 x1 x2 … xn-1 | xn-2 …), valid for any distance.
double ReflectAt(const std::vector<double>& x, std::int64_t i) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (n == 1) return x[0];
  const std::int64_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return x[static_cast<std::size_t>(i)];
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::size_t StftFrameCount(std::size_t signal_length, int hop) {
  const auto h = static_cast<std::size_t>(hop);
  return (signal_length + h - 1) / h + 1;
}

std::vector<double> PeriodicHann(int size) {
  std::vector<double> w(static_cast<std::size_t>(size));
  for (int n = 0; n < size; ++n) {
    w[static_cast<std::size_t>(n)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / size);
  }
  return w;
}

Spectrogram Stft(const AudioClip& clip, int frame_size, int hop) {
  CheckParameters(frame_size, hop);
  ValidateClip(clip);
  if (clip.num_channels() != 1) {
    Fail(ErrorKind::kParameter, "STFT expects a mono clip");
  }
  const std::vector<double>& x = clip.samples();
  const std::size_t n = x.size();
  const std::size_t frames = StftFrameCount(n, hop);
  const int bins = frame_size / 2 + 1;
  const std::int64_t pad = frame_size / 2;
  const std::vector<double> window = PeriodicHann(frame_size);

  Spectrogram spec;
  spec.frame_size = frame_size;
  spec.hop = hop;
  spec.sample_rate = clip.sample_rate;
  spec.signal_length = n;
  spec.frames.resize(static_cast<Eigen::Index>(frames), bins);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buffer(static_cast<std::size_t>(frame_size));
  std::vector<std::complex<double>> spectrum;
  // Reflection covers [-pad, n + pad); the tail beyond that is zero.
  const auto reflected_end = static_cast<std::int64_t>(n) + pad;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::int64_t start = static_cast<std::int64_t>(t) * hop - pad;
    for (int k = 0; k < frame_size; ++k) {
      const std::int64_t i = start + k;
      const double v = (n == 0 || i >= reflected_end) ? 0.0 : ReflectAt(x, i);
      buffer[static_cast<std::size_t>(k)] = v * window[static_cast<std::size_t>(k)];
    }
    fft.fwd(spectrum, buffer);
    for (int f = 0; f < bins; ++f) {
      spec.frames(static_cast<Eigen::Index>(t), f) = spectrum[static_cast<std::size_t>(f)];
    }
  }
  return spec;
}

AudioClip Istft(const Spectrogram& spec) {
  CheckParameters(spec.frame_size, spec.hop);
  const int frame_size = spec.frame_size;
  const int bins = frame_size / 2 + 1;
  if (spec.frames.cols() != bins) {
    Fail(ErrorKind::kShape, "spectrogram has " + std::to_string(spec.frames.cols()) +
                                " bins, expected " + std::to_string(bins));
  }
  if (!spec.frames.allFinite()) Fail(ErrorKind::kInput, "non-finite spectrogram");

  const std::size_t frames = spec.num_frames();
  const std::int64_t pad = frame_size / 2;
  const std::size_t padded = frames == 0 ? 0 : (frames - 1) * spec.hop + frame_size;
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  const std::vector<double> window = PeriodicHann(frame_size);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(bins));
  std::vector<double> buffer;
  for (std::size_t t = 0; t < frames; ++t) {
    for (int f = 0; f < bins; ++f) {
      spectrum[static_cast<std::size_t>(f)] = spec.frames(static_cast<Eigen::Index>(t), f);
    }
    // Real signals have real DC and Nyquist terms; drop any imaginary part a
    // modified spectrum may carry.
    spectrum.front() = spectrum.front().real();
    spectrum.back() = spectrum.back().real();
    fft.inv(buffer, spectrum);
    const std::size_t offset = t * spec.hop;
    for (int k = 0; k < frame_size; ++k) {
      const double w = window[static_cast<std::size_t>(k)];
      acc[offset + k] += buffer[static_cast<std::size_t>(k)] * w;
      norm[offset + k] += w * w;
    }
  }

  const std::size_t n = spec.signal_length;
  if (n + static_cast<std::size_t>(pad) > padded && n > 0) {
    Fail(ErrorKind::kShape, "signal length exceeds the spectrogram's coverage");
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pad);
    if (!(norm[j] > 1e-10)) {
      Fail(ErrorKind::kInternal, "zero overlap-add normalisation at sample " +
                                     std::to_string(i));
    }
    y[i] = acc[j] / norm[j];
  }
  return AudioClip::Mono(std::move(y), spec.sample_rate);
}

RealFrames Magnitude(const ComplexFrames& frames) { return frames.cwiseAbs(); }

RealFrames Phase(const ComplexFrames& frames) {
  return frames.unaryExpr([](const std::complex<double>& c) { return std::arg(c); });
}

ComplexFrames Polar(const RealFrames& magnitude, const RealFrames& phase) {
  if (magnitude.rows() != phase.rows() || magnitude.cols() != phase.cols()) {
    Fail(ErrorKind::kShape, "magnitude and phase shapes differ");
  }
  ComplexFrames out(magnitude.rows(), magnitude.cols());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out.data()[i] = std::polar(magnitude.data()[i], phase.data()[i]);
  }
  return out;
}

void SaveSpectrogram(const std::filesystem::path& path, const Spectrogram& spec) {
  std::string out = "SPEC";
  PutU32(out, 1);
  PutU32(out, static_cast<std::uint32_t>(spec.frames.rows()));
  PutU32(out, static_cast<std::uint32_t>(spec.frames.cols()));
  PutU32(out, static_cast<std::uint32_t>(spec.frame_size));
  PutU32(out, static_cast<std::uint32_t>(spec.hop));
  for (Eigen::Index i = 0; i < spec.frames.size(); ++i) {
    const auto c = spec.frames.data()[i];
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(c.real())));
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(c.imag())));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorKind::kIo, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) Fail(ErrorKind::kIo, "short write to " + path.string());
}

Spectrogram LoadSpectrogram(const std::filesystem::path& path, int sample_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 24 || std::memcmp(p, "SPEC", 4) != 0) {
    Fail(ErrorKind::kFormat, path.string() + ": not a spectrogram dump");
  }
  if (GetU32(p + 4) != 1) Fail(ErrorKind::kUnsupported, path.string() + ": version");
  const std::uint64_t t = GetU32(p + 8);
  const std::uint64_t f = GetU32(p + 12);
  Spectrogram spec;
  spec.frame_size = static_cast<int>(GetU32(p + 16));
  spec.hop = static_cast<int>(GetU32(p + 20));
  spec.sample_rate = sample_rate;
  if (bytes.size() != 24 + t * f * 8) {
    Fail(ErrorKind::kFormat, path.string() + ": payload size mismatch");
  }
  spec.frames.resize(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f));
  for (std::uint64_t i = 0; i < t * f; ++i) {
    const float re = std::bit_cast<float>(GetU32(p + 24 + 8 * i));
    const float im = std::bit_cast<float>(GetU32(p + 28 + 8 * i));
    spec.frames.data()[i] = {re, im};
  }
  spec.signal_length = t == 0 ? 0 : (t - 1) * static_cast<std::uint64_t>(spec.hop);
  return spec;
}

}  // namespace voicesep
