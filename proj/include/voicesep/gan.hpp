// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_GAN_HPP_
#define VOICESEP_GAN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voicesep/adam.hpp"
#include "voicesep/dense_net.hpp"
#include "voicesep/frames.hpp"
#include "voicesep/mask.hpp"

namespace voicesep {

/// What the discriminator sees next to the vocal spectrum:
///   kVB  vocal + background          (2F, no conditioning)
///   kVM  vocal + mixture             (2F)
///   kVBM vocal + background + mixture (3F)
enum class GanVariant { kVB, kVM, kVBM };

std::string_view VariantName(GanVariant v);  // "vb", "vm", "vbm"
GanVariant ParseVariant(std::string_view name);
Eigen::Index DiscriminatorInputWidth(GanVariant v, Eigen::Index bins);

// Row-wise concatenation in the order listed above; used for both the clean
// (real) and generated (fake) sides.
template <typename T>
Matrix<T> BuildDiscriminatorInput(GanVariant v, const Matrix<T>& vocal, const Matrix<T>& music,
                                  const Matrix<T>& mixture);

/// Routes dL/d(discriminator input) back to the vocal and background
/// estimates. Mixture columns are dropped: the conditioning does not depend
/// on the generator. For kVM the background gradient is zero.
template <typename T>
RawGradients<T> RouteDiscriminatorGradient(GanVariant v, const Matrix<T>& input_gradient,
                                           Eigen::Index bins);

// Discriminator outputs are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
// before taking logs.
inline constexpr double kProbabilityClamp = 1e-7;

template <typename T>
struct LossWithGradient {
  T loss = 0;
  Matrix<T> grad_real;  // B x 1, w.r.t. D(real)
  Matrix<T> grad_fake;  // B x 1, w.r.t. D(fake)
};

/// -mean log D(real) - mean log(1 - D(fake)). Minimising it is the
/// discriminator's ascent on the adversarial value function. The gradient is
/// that of the log at the clamped probability.
template <typename T>
LossWithGradient<T> DiscriminatorLoss(const Matrix<T>& d_real, const Matrix<T>& d_fake);

// Non-saturating generator loss, -mean log D(fake). Only grad_fake is set.
template <typename T>
LossWithGradient<T> GeneratorLogDLoss(const Matrix<T>& d_fake);

struct TrainingSchedule {
  int pretrain_epochs = 30;
  int adversarial_epochs = 20;
  int batch_size = 64;
  int d_steps_per_g_step = 1;
  AdamConfig pretrain_adam{1e-4, 0.9, 0.999, 1e-8};
  AdamConfig generator_adam{1e-5, 0.5, 0.999, 1e-8};
  AdamConfig discriminator_adam{1e-5, 0.5, 0.999, 1e-8};
  // Weight of the joint MSE term blended into the adversarial generator loss.
  double adversarial_mse_weight = 0.0;
  // When false the adversarial phase only trains the discriminator.
  bool update_generator = true;
  std::uint64_t seed = 1;

  void Validate() const;
};

// Generator output followed by the masking layer, in float.
SeparatedPair<float> GenerateSeparation(const DenseNet<float>& g, const Matrix<float>& mixture);

/// Supervised joint-MSE pretraining of the generator through the masking
/// layer. Returns the mean batch loss of each epoch. Zero epochs leaves the
/// network untouched.
std::vector<double> Pretrain(DenseNet<float>& g, const FrameSet& data,
                             const TrainingSchedule& schedule);

struct EpochDiagnostics {
  int epoch = 0;
  double d_loss = 0;
  double g_loss = 0;
  double d_accuracy = 0;  // balanced real/fake accuracy on the held-out set
  double wallclock_ms = 0;
};

/// Fraction of held-out frames classified correctly (D > 0.5 means real),
/// over an equal number of real and generated inputs.
double DiscriminatorAccuracy(const DenseNet<float>& g, const DenseNet<float>& d,
                             GanVariant variant, const FrameSet& heldout);

/// Alternating adversarial fine-tuning: per mini-batch, d_steps_per_g_step
/// discriminator updates on clean vs generated (detached) inputs, then one
/// generator update on the log-D loss. The generator must already be
/// pretrained.
std::vector<EpochDiagnostics> AdversarialTrain(DenseNet<float>& g, DenseNet<float>& d,
                                               GanVariant variant, const FrameSet& train,
                                               const FrameSet& heldout,
                                               const TrainingSchedule& schedule);

// Relu hidden layers, sigmoid output, input width from the variant.
DenseNet<float> MakeDiscriminator(GanVariant v, Eigen::Index bins, std::span<const int> hidden,
                                  std::uint64_t seed);
// Initial bias of every generator output unit.
inline constexpr float kGeneratorOutputBias = 0.5f;

// Relu throughout; F in, 2F out. Output biases start at kGeneratorOutputBias.
DenseNet<float> MakeGenerator(Eigen::Index bins, std::span<const int> hidden,
                              std::uint64_t seed);

// "epoch,d_loss,g_loss,d_accuracy,wallclock_ms" CSV.
void WriteDiagnosticsCsv(const std::filesystem::path& path,
                         const std::vector<EpochDiagnostics>& rows);

}  // namespace voicesep

#endif  // VOICESEP_GAN_HPP_
