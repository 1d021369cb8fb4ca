// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_DENSE_NET_HPP_
#define VOICESEP_DENSE_NET_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace voicesep {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Serialized as a u8 in checkpoints; keep the values stable.
enum class Activation : std::uint8_t { kLinear = 0, kRelu = 1, kSigmoid = 2 };

const char* ActivationName(Activation a);

template <typename T>
struct DenseLayer {
  Matrix<T> weight;  // out x in
  Vector<T> bias;    // out
  Activation activation = Activation::kLinear;

  Eigen::Index in() const { return weight.cols(); }
  Eigen::Index out() const { return weight.rows(); }
  // Exact comparison; layers of different shapes are unequal.
  bool operator==(const DenseLayer& o) const {
    return activation == o.activation && weight.rows() == o.weight.rows() &&
           weight.cols() == o.weight.cols() && bias.size() == o.bias.size() &&
           (weight.array() == o.weight.array()).all() && (bias.array() == o.bias.array()).all();
  }
};

/// Fully connected feed-forward network. Parameters change only through
/// AdamStep (or explicit assignment in tests).
template <typename T>
struct DenseNet {
  std::vector<DenseLayer<T>> layers;
  std::uint64_t seed = 0;

  Eigen::Index input_width() const { return layers.front().in(); }
  Eigen::Index output_width() const { return layers.back().out(); }
  std::size_t parameter_count() const;

  template <typename U>
  DenseNet<U> Cast() const {
    DenseNet<U> out;
    out.seed = seed;
    for (const auto& l : layers) {
      out.layers.push_back(
          {l.weight.template cast<U>(), l.bias.template cast<U>(), l.activation});
    }
    return out;
  }

  bool operator==(const DenseNet&) const = default;
};

/// Everything backward needs: the input and every layer's pre- and
/// post-activation values. Rows are batch samples.
template <typename T>
struct Trace {
  Matrix<T> input;
  std::vector<Matrix<T>> pre;
  std::vector<Matrix<T>> post;

  const Matrix<T>& output() const { return post.back(); }
};

template <typename T>
struct Gradients {
  std::vector<Matrix<T>> weight;
  std::vector<Vector<T>> bias;
  Matrix<T> input;  // dL/dinput, B x D_in

  Gradients& operator+=(const Gradients& other);
};

template <typename T>
Gradients<T> ZeroGradients(const DenseNet<T>& net);

/// Builds a network with layer_dims.size() - 1 layers. Relu layers use
/// He-uniform weights, the others Glorot-uniform; biases start at zero.
/// Weights are drawn in double from SplitMix64(seed) and then cast, so a
/// float and a double network built from the same seed hold the same values
/// up to rounding.
template <typename T>
DenseNet<T> InitNetwork(std::span<const int> layer_dims,
                        std::span<const Activation> activations, std::uint64_t seed);

// Relu hidden layers with the given output activation.
template <typename T>
DenseNet<T> InitMlp(std::span<const int> layer_dims, Activation output,
                    std::uint64_t seed);

template <typename T>
Trace<T> Forward(const DenseNet<T>& net, const Matrix<T>& inputs);

/// Reverse-mode gradients of a scalar loss whose gradient with respect to the
/// network output is `output_gradient` (B x D_out). Gradients are summed over
/// the batch rows; any batch averaging belongs in the loss.
template <typename T>
Gradients<T> Backward(const DenseNet<T>& net, const Trace<T>& trace,
                      const Matrix<T>& output_gradient);

template <typename T>
T Sigmoid(T x);

}  // namespace voicesep

#endif  // VOICESEP_DENSE_NET_HPP_
