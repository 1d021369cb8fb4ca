// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/mask.hpp"

#include <string>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

template <typename A, typename B>
void SameShape(const A& a, const B& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    Fail(ErrorKind::kShape, std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

template <typename T>
Matrix<T> SoftMask(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music) {
  SameShape(raw_vocal, raw_music, "soft mask inputs");
  const T floor = static_cast<T>(kMaskFloor);
  const auto a = raw_vocal.array().abs();
  const auto b = raw_music.array().abs();
  return ((a + floor / T(2)) / (a + b + floor)).matrix();
}

template <typename T>
MaskedSpectra<T> ApplyMask(const Matrix<T>& mask, const Matrix<T>& mixture) {
  SameShape(mask, mixture, "mask and mixture");
  if (mask.size() > 0 && (mask.minCoeff() < T(0) || mask.maxCoeff() > T(1))) {
    Fail(ErrorKind::kInput, "mask values outside [0, 1]");
  }
  if (mixture.size() > 0 && mixture.minCoeff() < T(0)) {
    Fail(ErrorKind::kInput, "negative mixture magnitude");
  }
  MaskedSpectra<T> out;
  out.vocal = mask.cwiseProduct(mixture);
  out.music = mixture - out.vocal;
  return out;
}

template <typename T>
SeparatedPair<T> MaskLayerForward(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music,
                                  const Matrix<T>& mixture) {
  SeparatedPair<T> out;
  out.mask = SoftMask(raw_vocal, raw_music);
  MaskedSpectra<T> s = ApplyMask(out.mask, mixture);
  out.vocal = std::move(s.vocal);
  out.music = std::move(s.music);
  return out;
}

template <typename T>
RawGradients<T> MaskLayerBackward(const Matrix<T>& raw_vocal, const Matrix<T>& raw_music,
                                  const Matrix<T>& mixture, const Matrix<T>& grad_vocal,
                                  const Matrix<T>& grad_music) {
  SameShape(raw_vocal, raw_music, "raw outputs");
  SameShape(raw_vocal, mixture, "raw outputs and mixture");
  SameShape(grad_vocal, mixture, "vocal gradient");
  SameShape(grad_music, mixture, "music gradient");
  const T floor = static_cast<T>(kMaskFloor);
  const auto a = raw_vocal.array().abs();
  const auto b = raw_music.array().abs();
  const auto s = a + b + floor;
  const auto dmask = mixture.array() * (grad_vocal.array() - grad_music.array()) / (s * s);
  const auto sign = [](T v) { return v >= T(0) ? T(1) : T(-1); };
  const auto sign_a = raw_vocal.array().unaryExpr(sign);
  const auto sign_b = raw_music.array().unaryExpr(sign);
  RawGradients<T> g;
  g.vocal = (dmask * (b + floor / T(2)) * sign_a).matrix();
  g.music = (-dmask * (a + floor / T(2)) * sign_b).matrix();
  return g;
}

template <typename T>
T MseJoint(const SeparatedPair<T>& pred, const Matrix<T>& target_vocal,
           const Matrix<T>& target_music) {
  SameShape(pred.vocal, target_vocal, "vocal target");
  SameShape(pred.music, target_music, "music target");
  if (pred.vocal.rows() == 0) return T(0);
  const T total = (pred.vocal - target_vocal).squaredNorm() +
                  (pred.music - target_music).squaredNorm();
  return total / static_cast<T>(pred.vocal.rows());
}

template <typename T>
RawGradients<T> MseJointGradient(const SeparatedPair<T>& pred, const Matrix<T>& target_vocal,
                                 const Matrix<T>& target_music) {
  SameShape(pred.vocal, target_vocal, "vocal target");
  SameShape(pred.music, target_music, "music target");
  const T scale = T(2) / static_cast<T>(std::max<Eigen::Index>(1, pred.vocal.rows()));
  return {scale * (pred.vocal - target_vocal), scale * (pred.music - target_music)};
}

template <typename T>
Matrix<T> IdealBinaryMask(const Matrix<T>& vocal_magnitude, const Matrix<T>& music_magnitude) {
  SameShape(vocal_magnitude, music_magnitude, "oracle magnitudes");
  return vocal_magnitude.binaryExpr(music_magnitude,
                                    [](T v, T m) { return v >= m ? T(1) : T(0); });
}

template <typename T>
RawGradients<T> SplitRaw(const Matrix<T>& generator_output) {
  if (generator_output.cols() % 2 != 0) {
    Fail(ErrorKind::kShape, "generator output width must be even");
  }
  const Eigen::Index f = generator_output.cols() / 2;
  return {generator_output.leftCols(f), generator_output.rightCols(f)};
}

template <typename T>
Matrix<T> JoinRaw(const Matrix<T>& vocal, const Matrix<T>& music) {
  SameShape(vocal, music, "raw halves");
  Matrix<T> out(vocal.rows(), vocal.cols() * 2);
  out << vocal, music;
  return out;
}

#define VOICESEP_INSTANTIATE(T)                                                          \
  template Matrix<T> SoftMask<T>(const Matrix<T>&, const Matrix<T>&);                    \
  template MaskedSpectra<T> ApplyMask<T>(const Matrix<T>&, const Matrix<T>&);            \
  template SeparatedPair<T> MaskLayerForward<T>(const Matrix<T>&, const Matrix<T>&,      \
                                                const Matrix<T>&);                       \
  template RawGradients<T> MaskLayerBackward<T>(const Matrix<T>&, const Matrix<T>&,      \
                                                const Matrix<T>&, const Matrix<T>&,      \
                                                const Matrix<T>&);                       \
  template T MseJoint<T>(const SeparatedPair<T>&, const Matrix<T>&, const Matrix<T>&);   \
  template RawGradients<T> MseJointGradient<T>(const SeparatedPair<T>&, const Matrix<T>&, \
                                               const Matrix<T>&);                        \
  template Matrix<T> IdealBinaryMask<T>(const Matrix<T>&, const Matrix<T>&);             \
  template RawGradients<T> SplitRaw<T>(const Matrix<T>&);                                \
  template Matrix<T> JoinRaw<T>(const Matrix<T>&, const Matrix<T>&);

VOICESEP_INSTANTIATE(float)
VOICESEP_INSTANTIATE(double)

#undef VOICESEP_INSTANTIATE

}  // namespace voicesep
