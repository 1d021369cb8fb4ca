// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_SEPARATE_HPP_
#define VOICESEP_SEPARATE_HPP_

#include <string_view>

#include "voicesep/audio.hpp"
#include "voicesep/dataset.hpp"
#include "voicesep/dense_net.hpp"
#include "voicesep/stft.hpp"

namespace voicesep {

struct SeparationResult {
  AudioClip vocal;
  AudioClip music;
};

/// Masks the mixture magnitude with `mask` (T x F, values in [0, 1]), puts
/// the mixture phase back on both parts and inverts. The music part is the
/// mixture magnitude minus the vocal part, so the two outputs add up to the
/// mixture up to STFT round-trip error.
SeparationResult SeparateWithMask(const Spectrogram& mixture, const RealFrames& mask);

/// Full model path: STFT, divide by `scale`, generator, masking layer,
/// inverse STFT. The masking layer is evaluated on the unnormalised
/// magnitudes, which is equivalent because it is linear in the mixture.
SeparationResult Separate(const DenseNet<float>& generator, const AudioClip& mixture,
                          double scale, int frame_size, int hop);

enum class OracleMask { kIdealBinary, kIdealSoft };
OracleMask ParseOracleMask(std::string_view name);  // "ibm" | "soft"

// Mask computed from the clean source images of `clip`.
RealFrames ComputeOracleMask(const ClipRecord& clip, OracleMask kind, int frame_size, int hop);

SeparationResult SeparateWithOracle(const ClipRecord& clip, OracleMask kind, int frame_size,
                                    int hop);

}  // namespace voicesep

#endif  // VOICESEP_SEPARATE_HPP_
