// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/separate.hpp"

#include <string>

#include "voicesep/error.hpp"
#include "voicesep/mask.hpp"

namespace voicesep {
namespace {

// Row chunk for generator inference; bounds peak memory on long clips.
constexpr Eigen::Index kInferenceChunk = 512;

Spectrogram WithFrames(const Spectrogram& like, ComplexFrames frames) {
  Spectrogram s = like;
  s.frames = std::move(frames);
  return s;
}

}  // namespace

SeparationResult SeparateWithMask(const Spectrogram& mixture, const RealFrames& mask) {
  const RealFrames magnitude = Magnitude(mixture.frames);
  const RealFrames phase = Phase(mixture.frames);
  const MaskedSpectra<double> parts = ApplyMask<double>(mask, magnitude);
  SeparationResult out;
  out.vocal = Istft(WithFrames(mixture, Polar(parts.vocal, phase)));
  out.music = Istft(WithFrames(mixture, Polar(parts.music, phase)));
  return out;
}

SeparationResult Separate(const DenseNet<float>& generator, const AudioClip& mixture,
                          double scale, int frame_size, int hop) {
  const Eigen::Index bins = frame_size / 2 + 1;
  if (generator.input_width() != bins || generator.output_width() != 2 * bins) {
    Fail(ErrorKind::kCheckpoint, "generator expects " + std::to_string(generator.input_width()) +
                                     " bins but the STFT yields " + std::to_string(bins));
  }
  if (!(scale > 0.0)) Fail(ErrorKind::kParameter, "normalisation scale must be positive");

  const Spectrogram spec = Stft(mixture, frame_size, hop);
  const RealFrames magnitude = Magnitude(spec.frames);
  const Matrix<float> features = (magnitude / scale).cast<float>();
  RealFrames mask(magnitude.rows(), magnitude.cols());
  for (Eigen::Index start = 0; start < features.rows(); start += kInferenceChunk) {
    const Eigen::Index rows = std::min(kInferenceChunk, features.rows() - start);
    const Matrix<float> chunk = features.middleRows(start, rows);
    const RawGradients<float> raw = SplitRaw(Forward(generator, chunk).output());
    mask.middleRows(start, rows) =
        SoftMask<double>(raw.vocal.cast<double>(), raw.music.cast<double>());
  }
  return SeparateWithMask(spec, mask);
}

OracleMask ParseOracleMask(std::string_view name) {
  if (name == "ibm") return OracleMask::kIdealBinary;
  if (name == "soft") return OracleMask::kIdealSoft;
  Fail(ErrorKind::kParameter, "unknown oracle mask '" + std::string(name) + "'");
}

RealFrames ComputeOracleMask(const ClipRecord& clip, OracleMask kind, int frame_size, int hop) {
  const int rate = clip.mixture.sample_rate;
  const RealFrames vocal =
      Magnitude(Stft(AudioClip::Mono(clip.VocalImage(), rate), frame_size, hop).frames);
  const RealFrames music =
      Magnitude(Stft(AudioClip::Mono(clip.MusicImage(), rate), frame_size, hop).frames);
  return kind == OracleMask::kIdealBinary ? IdealBinaryMask<double>(vocal, music)
                                          : SoftMask<double>(vocal, music);
}

SeparationResult SeparateWithOracle(const ClipRecord& clip, OracleMask kind, int frame_size,
                                    int hop) {
  return SeparateWithMask(Stft(clip.mixture, frame_size, hop),
                          ComputeOracleMask(clip, kind, frame_size, hop));
}

}  // namespace voicesep
