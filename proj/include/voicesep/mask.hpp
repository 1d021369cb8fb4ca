// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_MASK_HPP_
#define VOICESEP_MASK_HPP_

#include "voicesep/dense_net.hpp"

namespace voicesep {

// Silent-bin floor. Split evenly between numerator and denominator so that
// 0/0 bins give a mask of exactly 0.5.
inline constexpr double kMaskFloor = 1e-8;

// All functions below work row-wise on B x F batches; a single frame is a
// 1 x F matrix. Row = frame, column = frequency bin.

/// m = (|a| + floor/2) / (|a| + |b| + floor), elementwise. Always in [0, 1].
template <typename T>
Matrix<T> SoftMask(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music);

template <typename T>
struct MaskedSpectra {
  Matrix<T> vocal;  // m * z
  Matrix<T> music;  // (1 - m) * z, formed as z - m * z so the pair sums to z
};

template <typename T>
MaskedSpectra<T> ApplyMask(const Matrix<T>& mask, const Matrix<T>& mixture);

/// Output of the masking layer placed after the generator.
template <typename T>
struct SeparatedPair {
  Matrix<T> vocal;  // y1_hat
  Matrix<T> music;  // y2_hat
  Matrix<T> mask;
};

template <typename T>
SeparatedPair<T> MaskLayerForward(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music,
                                  const Matrix<T>& mixture);

template <typename T>
struct RawGradients {
  Matrix<T> vocal;  // dL/d raw_vocal
  Matrix<T> music;  // dL/d raw_music
};

/// Quotient-rule gradients of MaskLayerForward with respect to the raw
/// network outputs, given dL/dy1_hat and dL/dy2_hat. With S = |a|+|b|+floor:
///   dm/da = (|b| + floor/2) / S^2 * sign(a),  dm/db = -(|a| + floor/2) / S^2 * sign(b)
///   dL/dm = z * (g_vocal - g_music)
template <typename T>
RawGradients<T> MaskLayerBackward(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music,
                                  const Matrix<T>& mixture, const Matrix<T>& grad_vocal,
                                  const Matrix<T>& grad_music);

/// Joint MSE: squared error summed over bins and both sources, averaged over
/// frames (rows).
template <typename T>
T MseJoint(const SeparatedPair<T>& pred, const Matrix<T>& target_vocal,
           const Matrix<T>& target_music);

// dJ/dy1_hat, dJ/dy2_hat for MseJoint.
template <typename T>
RawGradients<T> MseJointGradient(const SeparatedPair<T>& pred, const Matrix<T>& target_vocal,
                                 const Matrix<T>& target_music);

/// 1 where vocal >= music (ties go to the vocal), else 0.
template <typename T>
Matrix<T> IdealBinaryMask(const Matrix<T>& vocal_magnitude, const Matrix<T>& music_magnitude);

// Splits a B x 2F generator output into its vocal (first F) and music halves.
template <typename T>
RawGradients<T> SplitRaw(const Matrix<T>& generator_output);

template <typename T>
Matrix<T> JoinRaw(const Matrix<T>& vocal, const Matrix<T>& music);

}  // namespace voicesep

#endif  // VOICESEP_MASK_HPP_
