// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_ADAM_HPP_
#define VOICESEP_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "voicesep/dense_net.hpp"

namespace voicesep {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
struct AdamState {
  AdamConfig config;
  std::vector<Matrix<T>> m_weight, v_weight;
  std::vector<Vector<T>> m_bias, v_bias;
  std::uint64_t step = 0;
};

// Zero moments shaped like `net`.
template <typename T>
AdamState<T> MakeAdamState(const DenseNet<T>& net, const AdamConfig& config);

/// Bias-corrected Adam update in place. Throws kTraining naming the layer if
/// a gradient or an updated parameter is non-finite; on a gradient error
/// neither the network nor the state is touched.
template <typename T>
void AdamStep(DenseNet<T>& net, const Gradients<T>& grads, AdamState<T>& state);

}  // namespace voicesep

#endif  // VOICESEP_ADAM_HPP_
