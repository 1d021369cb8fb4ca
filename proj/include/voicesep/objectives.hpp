// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_OBJECTIVES_HPP_
#define VOICESEP_OBJECTIVES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "voicesep/gan.hpp"
#include "voicesep/grad_check.hpp"

namespace voicesep {

// Every loss composition the training code differentiates.
enum class LossTag {
  kMse,           // plain squared error on the network output, mean over rows
  kBce,           // discriminator loss on a real and a fake batch
  kMaskMse,       // generator -> masking layer -> joint MSE
  kAdversarialG,  // generator -> masking layer -> D input -> D -> -log D
};

const char* LossTagName(LossTag tag);

/// Data for one loss composition. Which fields are read depends on the tag:
///   kMse          inputs, targets
///   kBce          inputs (real side), fake_inputs
///   kMaskMse      inputs (mixture), vocal, music
///   kAdversarialG inputs (mixture), discriminator, variant
struct LossProblem {
  LossTag tag = LossTag::kMse;
  Matrix<double> inputs;
  Matrix<double> targets;
  Matrix<double> fake_inputs;
  Matrix<double> vocal;
  Matrix<double> music;
  const DenseNet<double>* discriminator = nullptr;
  GanVariant variant = GanVariant::kVBM;
};

Objective MakeObjective(const LossProblem& problem);

/// Hash of every relu on/off state and probability-clamp state the loss
/// passes through.
RegionFn MakeRegion(const LossProblem& problem);

/// GradCheck on MakeObjective(problem); fills options.region from MakeRegion
/// when it is unset.
GradCheckResult CheckLossGradients(const DenseNet<double>& net, const LossProblem& problem,
                                   const GradCheckOptions& options = {});

struct NamedGradCheck {
  std::string name;
  GradCheckResult result;
};

/// The shipped compositions on seeded toy instances (F = 33, generator
/// [33, 64, 64, 66], discriminator [99, 64, 64, 1] for the conditioned
/// variant), each checked on at least 200 coordinates with epsilon 1e-5.
std::vector<NamedGradCheck> RunStandardGradChecks(std::uint64_t seed);

}  // namespace voicesep

#endif  // VOICESEP_OBJECTIVES_HPP_
