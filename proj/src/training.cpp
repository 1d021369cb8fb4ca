// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "voicesep/error.hpp"
#include "voicesep/frames.hpp"
#include "voicesep/gan.hpp"
#include "voicesep/rng.hpp"

namespace voicesep {

FrameSet FrameSet::Rows(const std::vector<Eigen::Index>& rows) const {
  FrameSet out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.mixture.resize(n, bins());
  out.vocal.resize(n, bins());
  out.music.resize(n, bins());
  const bool labelled = clip_ids.size() == size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    out.mixture.row(i) = mixture.row(r);
    out.vocal.row(i) = vocal.row(r);
    out.music.row(i) = music.row(r);
    if (labelled) {
      out.clip_ids.push_back(clip_ids[static_cast<std::size_t>(r)]);
      out.frame_indices.push_back(frame_indices[static_cast<std::size_t>(r)]);
    }
  }
  return out;
}

void FrameSet::Append(const FrameSet& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (other.bins() != bins()) Fail(ErrorKind::kShape, "frame sets differ in bin count");
  auto stack = [](Matrix<float>& a, const Matrix<float>& b) {
    Matrix<float> c(a.rows() + b.rows(), a.cols());
    c << a, b;
    a = std::move(c);
  };
  stack(mixture, other.mixture);
  stack(vocal, other.vocal);
  stack(music, other.music);
  clip_ids.insert(clip_ids.end(), other.clip_ids.begin(), other.clip_ids.end());
  frame_indices.insert(frame_indices.end(), other.frame_indices.begin(),
                       other.frame_indices.end());
}

namespace {

constexpr std::uint64_t kPretrainStream = 0x505245;     // "PRE"
constexpr std::uint64_t kAdversarialStream = 0x414456;  // "ADV"

std::vector<std::vector<Eigen::Index>> EpochBatches(std::size_t n, int batch_size,
                                                    SplitMix64 rng) {
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  SeededShuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Eigen::Index>> batches;
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(n, start + static_cast<std::size_t>(batch_size));
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

void CheckData(const DenseNet<float>& g, const FrameSet& data) {
  if (data.empty()) Fail(ErrorKind::kParameter, "no training frames");
  if (g.input_width() != data.bins() || g.output_width() != 2 * data.bins()) {
    Fail(ErrorKind::kShape, "generator expects " + std::to_string(g.input_width()) +
                                " bins, data has " + std::to_string(data.bins()));
  }
}

[[noreturn]] void Diverged(const char* phase, int epoch, const std::string& detail) {
  Fail(ErrorKind::kTraining,
       std::string(phase) + " diverged in epoch " + std::to_string(epoch) + ": " + detail);
}

}  // namespace

SeparatedPair<float> GenerateSeparation(const DenseNet<float>& g, const Matrix<float>& mixture) {
  const Trace<float> trace = Forward(g, mixture);
  const RawGradients<float> raw = SplitRaw(trace.output());
  return MaskLayerForward(raw.vocal, raw.music, mixture);
}

std::vector<double> Pretrain(DenseNet<float>& g, const FrameSet& data,
                             const TrainingSchedule& schedule) {
  schedule.Validate();
  std::vector<double> curve;
  if (schedule.pretrain_epochs == 0) return curve;
  CheckData(g, data);

  AdamState<float> adam = MakeAdamState(g, schedule.pretrain_adam);
  const SplitMix64 stream = SplitMix64(schedule.seed).Fork(kPretrainStream);
  for (int epoch = 0; epoch < schedule.pretrain_epochs; ++epoch) {
    double total = 0.0;
    for (const auto& rows : EpochBatches(data.size(), schedule.batch_size,
                                         stream.Fork(static_cast<std::uint64_t>(epoch)))) {
      const FrameSet batch = data.Rows(rows);
      const Trace<float> trace = Forward(g, batch.mixture);
      const RawGradients<float> raw = SplitRaw(trace.output());
      const SeparatedPair<float> pair = MaskLayerForward(raw.vocal, raw.music, batch.mixture);
      const float loss = MseJoint(pair, batch.vocal, batch.music);
      if (!std::isfinite(loss)) Diverged("pretraining", epoch, "non-finite loss");

      const RawGradients<float> dy = MseJointGradient(pair, batch.vocal, batch.music);
      const RawGradients<float> draw =
          MaskLayerBackward(raw.vocal, raw.music, batch.mixture, dy.vocal, dy.music);
      const Gradients<float> grads = Backward(g, trace, JoinRaw(draw.vocal, draw.music));
      try {
        AdamStep(g, grads, adam);
      } catch (const Error& e) {
        Diverged("pretraining", epoch, e.what());
      }
      total += static_cast<double>(loss) * static_cast<double>(rows.size());
    }
    curve.push_back(total / static_cast<double>(data.size()));
  }
  return curve;
}

double DiscriminatorAccuracy(const DenseNet<float>& g, const DenseNet<float>& d,
                             GanVariant variant, const FrameSet& heldout) {
  if (heldout.empty()) Fail(ErrorKind::kParameter, "empty held-out set");
  const SeparatedPair<float> fake = GenerateSeparation(g, heldout.mixture);
  const Matrix<float> d_real = Forward(d, BuildDiscriminatorInput(variant, heldout.vocal,
                                                                  heldout.music,
                                                                  heldout.mixture))
                                   .output();
  const Matrix<float> d_fake =
      Forward(d, BuildDiscriminatorInput(variant, fake.vocal, fake.music, heldout.mixture))
          .output();
  const auto correct = (d_real.array() > 0.5f).count() + (d_fake.array() <= 0.5f).count();
  return static_cast<double>(correct) / (2.0 * static_cast<double>(heldout.size()));
}

std::vector<EpochDiagnostics> AdversarialTrain(DenseNet<float>& g, DenseNet<float>& d,
                                               GanVariant variant, const FrameSet& train,
                                               const FrameSet& heldout,
                                               const TrainingSchedule& schedule) {
  schedule.Validate();
  CheckData(g, train);
  const Eigen::Index bins = train.bins();
  if (d.input_width() != DiscriminatorInputWidth(variant, bins) || d.output_width() != 1) {
    Fail(ErrorKind::kShape, "discriminator width " + std::to_string(d.input_width()) +
                                " does not match variant " + std::string(VariantName(variant)));
  }
  if (heldout.bins() != bins) Fail(ErrorKind::kShape, "held-out set differs in bin count");

  AdamState<float> g_adam = MakeAdamState(g, schedule.generator_adam);
  AdamState<float> d_adam = MakeAdamState(d, schedule.discriminator_adam);
  const SplitMix64 stream = SplitMix64(schedule.seed).Fork(kAdversarialStream);
  std::vector<EpochDiagnostics> diagnostics;

  for (int epoch = 0; epoch < schedule.adversarial_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    double d_total = 0.0;
    double g_total = 0.0;
    std::size_t d_count = 0;
    std::size_t g_count = 0;
    for (const auto& rows : EpochBatches(train.size(), schedule.batch_size,
                                         stream.Fork(static_cast<std::uint64_t>(epoch)))) {
      const FrameSet batch = train.Rows(rows);
      const Matrix<float> real_input =
          BuildDiscriminatorInput(variant, batch.vocal, batch.music, batch.mixture);

      for (int k = 0; k < schedule.d_steps_per_g_step; ++k) {
        // Generated side is detached: no gradient reaches G here.
        const SeparatedPair<float> fake = GenerateSeparation(g, batch.mixture);
        const Matrix<float> fake_input =
            BuildDiscriminatorInput(variant, fake.vocal, fake.music, batch.mixture);
        const Trace<float> real_trace = Forward(d, real_input);
        const Trace<float> fake_trace = Forward(d, fake_input);
        const LossWithGradient<float> loss =
            DiscriminatorLoss(real_trace.output(), fake_trace.output());
        if (!std::isfinite(loss.loss)) Diverged("adversarial training", epoch, "D loss");
        Gradients<float> grads = Backward(d, real_trace, loss.grad_real);
        grads += Backward(d, fake_trace, loss.grad_fake);
        try {
          AdamStep(d, grads, d_adam);
        } catch (const Error& e) {
          Diverged("adversarial training", epoch, e.what());
        }
        d_total += loss.loss;
        ++d_count;
      }

      const Trace<float> g_trace = Forward(g, batch.mixture);
      const RawGradients<float> raw = SplitRaw(g_trace.output());
      const SeparatedPair<float> pair = MaskLayerForward(raw.vocal, raw.music, batch.mixture);
      const Trace<float> d_trace =
          Forward(d, BuildDiscriminatorInput(variant, pair.vocal, pair.music, batch.mixture));
      const LossWithGradient<float> g_loss = GeneratorLogDLoss(d_trace.output());
      if (!std::isfinite(g_loss.loss)) Diverged("adversarial training", epoch, "G loss");
      g_total += g_loss.loss;
      ++g_count;
      if (!schedule.update_generator) continue;

      const Gradients<float> d_grads = Backward(d, d_trace, g_loss.grad_fake);
      RawGradients<float> dy = RouteDiscriminatorGradient(variant, d_grads.input, bins);
      if (schedule.adversarial_mse_weight > 0.0) {
        const RawGradients<float> mse = MseJointGradient(pair, batch.vocal, batch.music);
        const auto w = static_cast<float>(schedule.adversarial_mse_weight);
        dy.vocal += w * mse.vocal;
        dy.music += w * mse.music;
      }
      const RawGradients<float> draw =
          MaskLayerBackward(raw.vocal, raw.music, batch.mixture, dy.vocal, dy.music);
      const Gradients<float> grads = Backward(g, g_trace, JoinRaw(draw.vocal, draw.music));
      try {
        AdamStep(g, grads, g_adam);
      } catch (const Error& e) {
        Diverged("adversarial training", epoch, e.what());
      }
    }

    EpochDiagnostics row;
    row.epoch = epoch;
    row.d_loss = d_total / static_cast<double>(std::max<std::size_t>(1, d_count));
    row.g_loss = g_total / static_cast<double>(std::max<std::size_t>(1, g_count));
    row.d_accuracy = DiscriminatorAccuracy(g, d, variant, heldout);
    row.wallclock_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    diagnostics.push_back(row);
  }
  return diagnostics;
}

}  // namespace voicesep
