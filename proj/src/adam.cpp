// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/adam.hpp"

#include <cmath>
#include <string>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

template <typename Param, typename Grad, typename Moment>
void Update(Param& p, const Grad& g, Moment& m, Moment& v, double b1, double b2,
            double lr_t, double eps_t) {
  using T = typename Param::Scalar;
  m = T(b1) * m + T(1 - b1) * g;
  v = T(b2) * v + T(1 - b2) * g.cwiseProduct(g);
  p.array() -= T(lr_t) * m.array() / (v.array().sqrt() + T(eps_t));
}

}  // namespace

template <typename T>
AdamState<T> MakeAdamState(const DenseNet<T>& net, const AdamConfig& config) {
  AdamState<T> s;
  s.config = config;
  for (const auto& l : net.layers) {
    s.m_weight.push_back(Matrix<T>::Zero(l.out(), l.in()));
    s.v_weight.push_back(Matrix<T>::Zero(l.out(), l.in()));
    s.m_bias.push_back(Vector<T>::Zero(l.out()));
    s.v_bias.push_back(Vector<T>::Zero(l.out()));
  }
  return s;
}

template <typename T>
void AdamStep(DenseNet<T>& net, const Gradients<T>& grads, AdamState<T>& state) {
  const std::size_t depth = net.layers.size();
  if (grads.weight.size() != depth || grads.bias.size() != depth ||
      state.m_weight.size() != depth) {
    Fail(ErrorKind::kShape, "gradients or optimizer state do not match the network");
  }
  for (std::size_t k = 0; k < depth; ++k) {
    const auto& l = net.layers[k];
    if (grads.weight[k].rows() != l.out() || grads.weight[k].cols() != l.in() ||
        grads.bias[k].size() != l.out()) {
      Fail(ErrorKind::kShape, "gradient shape mismatch at layer " + std::to_string(k));
    }
    if (!grads.weight[k].allFinite() || !grads.bias[k].allFinite()) {
      Fail(ErrorKind::kTraining, "non-finite gradient at layer " + std::to_string(k));
    }
  }

  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(c.beta1, t);
  const double c2 = 1.0 - std::pow(c.beta2, t);
  // lr * m_hat / (sqrt(v_hat) + eps) rewritten with the corrections folded
  // into the step size and epsilon.
  const double lr_t = c.learning_rate * std::sqrt(c2) / c1;
  const double eps_t = c.epsilon * std::sqrt(c2);
  for (std::size_t k = 0; k < depth; ++k) {
    auto& l = net.layers[k];
    Update(l.weight, grads.weight[k], state.m_weight[k], state.v_weight[k], c.beta1,
           c.beta2, lr_t, eps_t);
    Update(l.bias, grads.bias[k], state.m_bias[k], state.v_bias[k], c.beta1, c.beta2,
           lr_t, eps_t);
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      Fail(ErrorKind::kTraining, "non-finite parameter after update at layer " +
                                     std::to_string(k));
    }
  }
}

template AdamState<float> MakeAdamState<float>(const DenseNet<float>&, const AdamConfig&);
template AdamState<double> MakeAdamState<double>(const DenseNet<double>&, const AdamConfig&);
template void AdamStep<float>(DenseNet<float>&, const Gradients<float>&, AdamState<float>&);
template void AdamStep<double>(DenseNet<double>&, const Gradients<double>&,
                               AdamState<double>&);

}  // namespace voicesep
