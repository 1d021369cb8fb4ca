// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_GRAD_CHECK_HPP_
#define VOICESEP_GRAD_CHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "voicesep/dense_net.hpp"

namespace voicesep {

// Evaluates a scalar loss of `net`. When `grads` is non-null it also fills the
// analytic parameter gradients.
using Objective = std::function<double(const DenseNet<double>& net, Gradients<double>* grads)>;

// Identifies the smooth piece of a piecewise-smooth loss at `net`, e.g. a hash
// of relu on/off states. Equal values at p - eps, p and p + eps mean the
// stencil stayed on one piece.
using RegionFn = std::function<std::uint64_t(const DenseNet<double>& net)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  std::size_t coordinates = 256;  // checks every parameter if the net is smaller
  // Gradients below significance * max|gradient| are compared in absolute terms.
  double significance = 1e-4;
  // When set, coordinates whose stencil crosses a region boundary are skipped.
  RegionFn region;
  std::uint64_t seed = 0;
};

// Pass thresholds for the shipped checks.
inline constexpr double kGradRelativeTolerance = 1e-6;
inline constexpr double kGradAbsoluteTolerance = 1e-8;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates_checked = 0;
  double max_absolute_error = 0.0;  // over the sub-significance coordinates
  std::size_t small_checked = 0;
  std::size_t kinks_skipped = 0;
  std::string worst;  // "layer 2 weight[17] analytic .. numeric .." locator
};

/// Central finite differences on a seeded subsample of parameters, compared
/// with the analytic gradient by |g_a - g_n| / max(|g_a|, |g_n|). Coordinates
/// whose gradients are both below the significance floor are scored by
/// |g_a - g_n| instead and do not count toward `coordinates`; neither do
/// coordinates skipped by `region`.
GradCheckResult GradCheck(const DenseNet<double>& net, const Objective& objective,
                          const GradCheckOptions& options = {});

}  // namespace voicesep

#endif  // VOICESEP_GRAD_CHECK_HPP_
