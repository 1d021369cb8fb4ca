// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "voicesep/audio.hpp"
#include "voicesep/error.hpp"

namespace voicesep {
namespace {

constexpr int kTapsPerPhase = 64;
constexpr double kKaiserBeta = 8.6;
// Passband edge as a fraction of the narrower Nyquist band.
constexpr double kRolloff = 0.95;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Prototype low-pass sampled at the upsampled rate, indexed by
// j in [-half, half]; stored at offset half. Scaled by `up` so zero-stuffed
// input keeps unit passband gain.
std::vector<double> DesignPrototype(std::int64_t up, std::int64_t down) {
  const std::int64_t half = kTapsPerPhase / 2 * up;
  const double cutoff = kRolloff * 0.5 / static_cast<double>(std::max(up, down));
  const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
  std::vector<double> h(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t j = -half; j <= half; ++j) {
    const double r = static_cast<double>(j) / static_cast<double>(half);
    const double window =
        std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    h[static_cast<std::size_t>(j + half)] =
        static_cast<double>(up) * 2.0 * cutoff * Sinc(2.0 * cutoff * static_cast<double>(j)) *
        window;
  }
  return h;
}

std::vector<double> ResampleChannel(const std::vector<double>& x, std::int64_t up,
                                    std::int64_t down, const std::vector<double>& h) {
  const std::int64_t half = kTapsPerPhase / 2 * up;
  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t out_len = (n * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(out_len));
  for (std::int64_t m = 0; m < out_len; ++m) {
    // Output m sits at up-rate position m*down; input n sits at n*up.
    const std::int64_t pos = m * down;
    const std::int64_t first = std::max<std::int64_t>(0, (pos - half + up - 1) / up);
    const std::int64_t last = std::min<std::int64_t>(n - 1, (pos + half) / up);
    double acc = 0.0;
    for (std::int64_t k = first; k <= last; ++k) {
      acc += x[static_cast<std::size_t>(k)] *
             h[static_cast<std::size_t>(pos - k * up + half)];
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return y;
}

}  // namespace

AudioClip Resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    Fail(ErrorKind::kParameter,
         "target rate must be positive, got " + std::to_string(target_rate));
  }
  ValidateClip(clip);
  if (target_rate == clip.sample_rate) return clip;

  const std::int64_t g = std::gcd(target_rate, clip.sample_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = clip.sample_rate / g;
  const std::vector<double> h = DesignPrototype(up, down);

  AudioClip out;
  out.sample_rate = target_rate;
  for (const auto& ch : clip.channels) {
    out.channels.push_back(ResampleChannel(ch, up, down, h));
  }
  return out;
}

}  // namespace voicesep
