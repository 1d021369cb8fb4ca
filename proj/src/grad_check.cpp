// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "voicesep/rng.hpp"

namespace voicesep {
namespace {

struct Coordinate {
  std::size_t layer;
  bool bias;
  Eigen::Index index;
};

double& ParamAt(DenseNet<double>& net, const Coordinate& c) {
  auto& l = net.layers[c.layer];
  return c.bias ? l.bias[c.index] : l.weight.data()[c.index];
}

double GradAt(const Gradients<double>& g, const Coordinate& c) {
  return c.bias ? g.bias[c.layer][c.index] : g.weight[c.layer].data()[c.index];
}

}  // namespace

GradCheckResult GradCheck(const DenseNet<double>& net, const Objective& objective,
                          const GradCheckOptions& options) {
  Gradients<double> analytic;
  objective(net, &analytic);

  std::vector<Coordinate> all;
  double largest = 0.0;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& l = net.layers[k];
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) all.push_back({k, false, i});
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) all.push_back({k, true, i});
    largest = std::max({largest, analytic.weight[k].cwiseAbs().maxCoeff(),
                        analytic.bias[k].cwiseAbs().maxCoeff()});
  }
  SplitMix64 rng(options.seed);
  SeededShuffle(all.begin(), all.end(), rng);
  const double floor = options.significance * largest;

  const std::uint64_t home = options.region ? options.region(net) : 0;

  GradCheckResult result;
  DenseNet<double> probe = net;
  for (const Coordinate& c : all) {
    if (result.coordinates_checked >= options.coordinates) break;
    double& p = ParamAt(probe, c);
    const double original = p;
    bool crossed = false;
    p = original + options.epsilon;
    const double plus = objective(probe, nullptr);
    if (options.region) crossed = options.region(probe) != home;
    p = original - options.epsilon;
    const double minus = objective(probe, nullptr);
    if (options.region) crossed = crossed || options.region(probe) != home;
    p = original;
    if (crossed) {
      ++result.kinks_skipped;
      continue;
    }

    const double numeric = (plus - minus) / (2.0 * options.epsilon);
    const double exact = GradAt(analytic, c);
    if (std::abs(exact) < floor && std::abs(numeric) < floor) {
      // Below the finite-difference noise band; compared in absolute terms.
      result.max_absolute_error = std::max(result.max_absolute_error, std::abs(exact - numeric));
      ++result.small_checked;
      continue;
    }
    const double err = std::abs(exact - numeric) / std::max(std::abs(exact), std::abs(numeric));
    if (err >= result.max_relative_error) {
      result.max_relative_error = err;
      std::ostringstream where;
      where << "layer " << c.layer << (c.bias ? " bias[" : " weight[") << c.index
            << "] analytic " << std::setprecision(6) << exact << " numeric " << numeric;
      result.worst = where.str();
    }
    ++result.coordinates_checked;
  }
  return result;
}

}  // namespace voicesep
