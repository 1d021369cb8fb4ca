// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_FRAMES_HPP_
#define VOICESEP_FRAMES_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "voicesep/dense_net.hpp"

namespace voicesep {

/// Index-aligned (z, y1, y2) magnitude frames, one row per frame, already
/// divided by the normalisation scale.
struct FrameSet {
  Matrix<float> mixture;  // z
  Matrix<float> vocal;    // y1
  Matrix<float> music;    // y2
  std::vector<std::string> clip_ids;  // per row
  std::vector<int> frame_indices;     // per row

  std::size_t size() const { return static_cast<std::size_t>(mixture.rows()); }
  Eigen::Index bins() const { return mixture.cols(); }
  bool empty() const { return size() == 0; }

  // Gathers the given rows into a new set.
  FrameSet Rows(const std::vector<Eigen::Index>& rows) const;
  void Append(const FrameSet& other);
};

}  // namespace voicesep

#endif  // VOICESEP_FRAMES_HPP_
