// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/objectives.hpp"

#include "voicesep/error.hpp"
#include "voicesep/rng.hpp"

namespace voicesep {

const char* LossTagName(LossTag tag) {
  switch (tag) {
    case LossTag::kMse: return "mse";
    case LossTag::kBce: return "bce";
    case LossTag::kMaskMse: return "mask-mse";
    case LossTag::kAdversarialG: return "adversarial-g";
  }
  return "?";
}

namespace {

double PlainMse(const DenseNet<double>& net, const LossProblem& p, Gradients<double>* grads) {
  const Trace<double> trace = Forward(net, p.inputs);
  const Matrix<double> diff = trace.output() - p.targets;
  const double rows = static_cast<double>(diff.rows());
  if (grads != nullptr) *grads = Backward(net, trace, Matrix<double>((2.0 / rows) * diff));
  return diff.squaredNorm() / rows;
}

double Bce(const DenseNet<double>& net, const LossProblem& p, Gradients<double>* grads) {
  const Trace<double> real = Forward(net, p.inputs);
  const Trace<double> fake = Forward(net, p.fake_inputs);
  const LossWithGradient<double> loss = DiscriminatorLoss(real.output(), fake.output());
  if (grads != nullptr) {
    *grads = Backward(net, real, loss.grad_real);
    *grads += Backward(net, fake, loss.grad_fake);
  }
  return loss.loss;
}

double MaskMse(const DenseNet<double>& net, const LossProblem& p, Gradients<double>* grads) {
  const Trace<double> trace = Forward(net, p.inputs);
  const RawGradients<double> raw = SplitRaw(trace.output());
  const SeparatedPair<double> pair = MaskLayerForward(raw.vocal, raw.music, p.inputs);
  const double loss = MseJoint(pair, p.vocal, p.music);
  if (grads != nullptr) {
    const RawGradients<double> dy = MseJointGradient(pair, p.vocal, p.music);
    const RawGradients<double> draw =
        MaskLayerBackward(raw.vocal, raw.music, p.inputs, dy.vocal, dy.music);
    *grads = Backward(net, trace, JoinRaw(draw.vocal, draw.music));
  }
  return loss;
}

double AdversarialG(const DenseNet<double>& net, const LossProblem& p,
                    Gradients<double>* grads) {
  if (p.discriminator == nullptr) {
    Fail(ErrorKind::kParameter, "adversarial objective needs a discriminator");
  }
  const DenseNet<double>& d = *p.discriminator;
  const Trace<double> g_trace = Forward(net, p.inputs);
  const RawGradients<double> raw = SplitRaw(g_trace.output());
  const SeparatedPair<double> pair = MaskLayerForward(raw.vocal, raw.music, p.inputs);
  const Trace<double> d_trace =
      Forward(d, BuildDiscriminatorInput(p.variant, pair.vocal, pair.music, p.inputs));
  const LossWithGradient<double> loss = GeneratorLogDLoss(d_trace.output());
  if (grads != nullptr) {
    const Gradients<double> d_grads = Backward(d, d_trace, loss.grad_fake);
    const RawGradients<double> dy =
        RouteDiscriminatorGradient(p.variant, d_grads.input, p.inputs.cols());
    const RawGradients<double> draw =
        MaskLayerBackward(raw.vocal, raw.music, p.inputs, dy.vocal, dy.music);
    *grads = Backward(net, g_trace, JoinRaw(draw.vocal, draw.music));
  }
  return loss.loss;
}

// FNV-1a over relu states, one byte per unit.
void HashRelu(const DenseNet<double>& net, const Trace<double>& trace, std::uint64_t* h) {
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    if (net.layers[k].activation != Activation::kRelu) continue;
    const Matrix<double>& pre = trace.pre[k];
    for (Eigen::Index i = 0; i < pre.size(); ++i) {
      *h = (*h ^ (pre.data()[i] > 0.0 ? 1u : 0u)) * 0x100000001b3ULL;
    }
  }
}

void HashClamp(const Matrix<double>& d, std::uint64_t* h) {
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double v = d.data()[i];
    const unsigned state = v < kProbabilityClamp ? 1u : (v > 1.0 - kProbabilityClamp ? 2u : 0u);
    *h = (*h ^ state) * 0x100000001b3ULL;
  }
}

constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

Matrix<double> RandomMatrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi,
                            SplitMix64& rng) {
  Matrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(lo, hi);
  return m;
}

}  // namespace

Objective MakeObjective(const LossProblem& problem) {
  switch (problem.tag) {
    case LossTag::kMse:
      return [&problem](const DenseNet<double>& n, Gradients<double>* g) {
        return PlainMse(n, problem, g);
      };
    case LossTag::kBce:
      return [&problem](const DenseNet<double>& n, Gradients<double>* g) {
        return Bce(n, problem, g);
      };
    case LossTag::kMaskMse:
      return [&problem](const DenseNet<double>& n, Gradients<double>* g) {
        return MaskMse(n, problem, g);
      };
    case LossTag::kAdversarialG:
      return [&problem](const DenseNet<double>& n, Gradients<double>* g) {
        return AdversarialG(n, problem, g);
      };
  }
  Fail(ErrorKind::kParameter, "unknown loss tag");
}

RegionFn MakeRegion(const LossProblem& problem) {
  return [&problem](const DenseNet<double>& net) {
    std::uint64_t h = kFnvBasis;
    switch (problem.tag) {
      case LossTag::kMse:
      case LossTag::kMaskMse:
        HashRelu(net, Forward(net, problem.inputs), &h);
        break;
      case LossTag::kBce:
        for (const Matrix<double>* in : {&problem.inputs, &problem.fake_inputs}) {
          const Trace<double> t = Forward(net, *in);
          HashRelu(net, t, &h);
          HashClamp(t.output(), &h);
        }
        break;
      case LossTag::kAdversarialG: {
        if (problem.discriminator == nullptr) {
          Fail(ErrorKind::kParameter, "adversarial objective needs a discriminator");
        }
        const Trace<double> g = Forward(net, problem.inputs);
        HashRelu(net, g, &h);
        const RawGradients<double> raw = SplitRaw(g.output());
        const SeparatedPair<double> pair = MaskLayerForward(raw.vocal, raw.music, problem.inputs);
        const DenseNet<double>& d = *problem.discriminator;
        const Trace<double> dt = Forward(
            d, BuildDiscriminatorInput(problem.variant, pair.vocal, pair.music, problem.inputs));
        HashRelu(d, dt, &h);
        HashClamp(dt.output(), &h);
        break;
      }
    }
    return h;
  };
}

GradCheckResult CheckLossGradients(const DenseNet<double>& net, const LossProblem& problem,
                                   const GradCheckOptions& options) {
  GradCheckOptions o = options;
  if (!o.region) o.region = MakeRegion(problem);
  return GradCheck(net, MakeObjective(problem), o);
}

std::vector<NamedGradCheck> RunStandardGradChecks(std::uint64_t seed) {
  constexpr Eigen::Index kBins = 33;
  constexpr Eigen::Index kBatch = 8;
  const std::vector<int> g_dims{33, 64, 64, 66};
  const std::vector<int> d_dims{99, 64, 64, 1};
  SplitMix64 rng = SplitMix64(seed).Fork(0x4752);

  GradCheckOptions options;
  options.coordinates = 256;
  options.epsilon = 1e-5;
  options.seed = seed;

  DenseNet<double> g = InitMlp<double>(g_dims, Activation::kRelu, seed);
  g.layers.back().bias.setConstant(kGeneratorOutputBias);
  const DenseNet<double> d = InitMlp<double>(d_dims, Activation::kSigmoid, seed + 1);

  LossProblem mask;
  mask.tag = LossTag::kMaskMse;
  mask.inputs = RandomMatrix(kBatch, kBins, 0.1, 1.0, rng);
  mask.vocal = RandomMatrix(kBatch, kBins, 0.0, 1.0, rng);
  mask.music = RandomMatrix(kBatch, kBins, 0.0, 1.0, rng);

  LossProblem bce;
  bce.tag = LossTag::kBce;
  bce.inputs = RandomMatrix(kBatch, 3 * kBins, 0.0, 1.0, rng);
  bce.fake_inputs = RandomMatrix(kBatch, 3 * kBins, 0.0, 1.0, rng);

  LossProblem adversarial;
  adversarial.tag = LossTag::kAdversarialG;
  adversarial.inputs = RandomMatrix(kBatch, kBins, 0.1, 1.0, rng);
  adversarial.discriminator = &d;
  adversarial.variant = GanVariant::kVBM;

  std::vector<NamedGradCheck> out;
  out.push_back({"mse through mask layer through generator", CheckLossGradients(g, mask, options)});
  out.push_back({"bce discriminator", CheckLossGradients(d, bce, options)});
  out.push_back({"log-D generator loss through discriminator",
                 CheckLossGradients(g, adversarial, options)});
  return out;
}

}  // namespace voicesep
