// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/dense_net.hpp"

#include <cmath>
#include <string>

#include "voicesep/error.hpp"
#include "voicesep/rng.hpp"

namespace voicesep {

const char* ActivationName(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

template <typename T>
T Sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
std::size_t DenseNet<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

template <typename T>
Gradients<T>& Gradients<T>::operator+=(const Gradients& other) {
  if (weight.size() != other.weight.size()) {
    Fail(ErrorKind::kShape, "accumulating gradients of different networks");
  }
  for (std::size_t k = 0; k < weight.size(); ++k) {
    weight[k] += other.weight[k];
    bias[k] += other.bias[k];
  }
  if (input.size() == other.input.size()) {
    input += other.input;
  } else {
    input.resize(0, 0);
  }
  return *this;
}

template <typename T>
Gradients<T> ZeroGradients(const DenseNet<T>& net) {
  Gradients<T> g;
  for (const auto& l : net.layers) {
    g.weight.push_back(Matrix<T>::Zero(l.out(), l.in()));
    g.bias.push_back(Vector<T>::Zero(l.out()));
  }
  return g;
}

template <typename T>
DenseNet<T> InitNetwork(std::span<const int> layer_dims,
                        std::span<const Activation> activations, std::uint64_t seed) {
  if (layer_dims.size() < 2) {
    Fail(ErrorKind::kParameter, "a network needs at least one layer");
  }
  if (activations.size() != layer_dims.size() - 1) {
    Fail(ErrorKind::kParameter, std::to_string(layer_dims.size() - 1) + " layers but " +
                                    std::to_string(activations.size()) + " activations");
  }
  for (int d : layer_dims) {
    if (d <= 0) Fail(ErrorKind::kParameter, "layer widths must be positive");
  }

  SplitMix64 rng(seed);
  DenseNet<T> net;
  net.seed = seed;
  for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
    const int in = layer_dims[k];
    const int out = layer_dims[k + 1];
    const Activation act = activations[k];
    const double limit = act == Activation::kRelu ? std::sqrt(6.0 / in)
                                                  : std::sqrt(6.0 / (in + out));
    DenseLayer<T> layer;
    layer.activation = act;
    layer.weight.resize(out, in);
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = static_cast<T>(rng.Uniform(-limit, limit));
    }
    layer.bias = Vector<T>::Zero(out);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

template <typename T>
DenseNet<T> InitMlp(std::span<const int> layer_dims, Activation output,
                    std::uint64_t seed) {
  std::vector<Activation> acts(layer_dims.size() > 1 ? layer_dims.size() - 1 : 0,
                               Activation::kRelu);
  if (!acts.empty()) acts.back() = output;
  return InitNetwork<T>(layer_dims, acts, seed);
}

template <typename T>
Trace<T> Forward(const DenseNet<T>& net, const Matrix<T>& inputs) {
  if (inputs.cols() != net.input_width()) {
    Fail(ErrorKind::kShape, "input width " + std::to_string(inputs.cols()) +
                                " does not match network width " +
                                std::to_string(net.input_width()));
  }
  if (!inputs.allFinite()) Fail(ErrorKind::kInput, "non-finite network input");

  Trace<T> trace;
  trace.input = inputs;
  trace.pre.reserve(net.layers.size());
  trace.post.reserve(net.layers.size());
  const Matrix<T>* x = &trace.input;
  for (const auto& layer : net.layers) {
    Matrix<T> z(x->rows(), layer.out());
    z.noalias() = *x * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    Matrix<T> a;
    switch (layer.activation) {
      case Activation::kLinear:
        a = z;
        break;
      case Activation::kRelu:
        a = z.cwiseMax(T(0));
        break;
      case Activation::kSigmoid:
        a = z.unaryExpr([](T v) { return Sigmoid(v); });
        break;
    }
    trace.pre.push_back(std::move(z));
    trace.post.push_back(std::move(a));
    x = &trace.post.back();
  }
  return trace;
}

template <typename T>
Gradients<T> Backward(const DenseNet<T>& net, const Trace<T>& trace,
                      const Matrix<T>& output_gradient) {
  const std::size_t depth = net.layers.size();
  if (trace.pre.size() != depth || trace.post.size() != depth ||
      trace.input.cols() != net.input_width()) {
    Fail(ErrorKind::kUsage, "trace was not produced by this network");
  }
  for (std::size_t k = 0; k < depth; ++k) {
    if (trace.pre[k].cols() != net.layers[k].out() ||
        trace.pre[k].rows() != trace.input.rows()) {
      Fail(ErrorKind::kUsage, "stale trace at layer " + std::to_string(k));
    }
  }
  if (output_gradient.rows() != trace.input.rows() ||
      output_gradient.cols() != net.output_width()) {
    Fail(ErrorKind::kShape, "output gradient shape does not match the trace");
  }

  Gradients<T> grads;
  grads.weight.resize(depth);
  grads.bias.resize(depth);
  Matrix<T> delta = output_gradient;
  for (std::size_t k = depth; k-- > 0;) {
    const auto& layer = net.layers[k];
    switch (layer.activation) {
      case Activation::kLinear:
        break;
      case Activation::kRelu:
        delta = (trace.pre[k].array() > T(0)).select(delta, T(0));
        break;
      case Activation::kSigmoid: {
        const auto& s = trace.post[k].array();
        delta = (delta.array() * s * (T(1) - s)).matrix();
        break;
      }
    }
    const Matrix<T>& x = k == 0 ? trace.input : trace.post[k - 1];
    grads.weight[k].noalias() = delta.transpose() * x;
    grads.bias[k] = delta.colwise().sum().transpose();
    Matrix<T> upstream(delta.rows(), layer.in());
    upstream.noalias() = delta * layer.weight;
    delta = std::move(upstream);
  }
  grads.input = std::move(delta);
  return grads;
}

#define VOICESEP_INSTANTIATE(T)                                                         \
  template T Sigmoid<T>(T);                                                             \
  template struct DenseNet<T>;                                                          \
  template struct Gradients<T>;                                                         \
  template Gradients<T> ZeroGradients<T>(const DenseNet<T>&);                           \
  template DenseNet<T> InitNetwork<T>(std::span<const int>, std::span<const Activation>, \
                                      std::uint64_t);                                   \
  template DenseNet<T> InitMlp<T>(std::span<const int>, Activation, std::uint64_t);     \
  template Trace<T> Forward<T>(const DenseNet<T>&, const Matrix<T>&);                   \
  template Gradients<T> Backward<T>(const DenseNet<T>&, const Trace<T>&, const Matrix<T>&);

VOICESEP_INSTANTIATE(float)
VOICESEP_INSTANTIATE(double)

#undef VOICESEP_INSTANTIATE

}  // namespace voicesep
