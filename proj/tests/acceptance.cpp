// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "voicesep/bss_eval.hpp"
#include "voicesep/checkpoint.hpp"
#include "voicesep/config.hpp"
#include "voicesep/dataset.hpp"
#include "voicesep/gan.hpp"
#include "voicesep/mask.hpp"
#include "voicesep/objectives.hpp"
#include "voicesep/rng.hpp"
#include "voicesep/runner.hpp"
#include "voicesep/separate.hpp"
#include "voicesep/stft.hpp"
#include "voicesep/synth.hpp"

namespace voicesep {
namespace {

// Tolerances and budgets.
constexpr double kRoundTripTol = 1e-6;
constexpr double kRoundTripBudgetS = 10;
constexpr double kGradTol = 1e-6;
constexpr double kGradAbsTol = 1e-8;  // gradients below 1e-4 of the largest
constexpr std::size_t kGradMinCoordinates = 200;
constexpr double kGradBudgetS = 30;
constexpr int kMaskCases = 10000;
constexpr int kMaskUlps = 4;
constexpr double kMaskScaleTol = 1e-6;
constexpr double kMaskMinScale = 1e-3;
constexpr double kBssTol = 1e-8;
constexpr double kBssTenToOneTolDb = 0.01;
constexpr int kMaxPretrainEpochs = 50;
constexpr double kMinHeldoutSdrDb = 15.0;
constexpr double kEndToEndBudgetS = 600;
constexpr int kAdversarialEpochs = 20;
constexpr double kMaxSdrDropDb = 1.0;
constexpr double kAccuracyLow = 0.35;
constexpr double kAccuracyHigh = 0.65;
constexpr double kConservationTol = 1e-3;

// BSS-Eval filter length for the synthetic suite (the library default).
constexpr int kEvalFilterLength = kDefaultFilterLength;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. STFT round trip

Outcome StftRoundTrip() {
  const auto start = Clock::now();
  SplitMix64 rng(20260101);
  double worst = 0;
  for (int clip = 0; clip < 100; ++clip) {
    const auto n = static_cast<std::size_t>(rng.Uniform(0.5, 2.0) * 22050);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.Uniform(-1.0, 1.0);
    const AudioClip back = Istft(Stft(AudioClip::Mono(x, 22050), 1024, 256));
    if (back.num_frames() != n) return {false, "inverse changed the length"};
    for (std::size_t i = 512; i + 512 < n; ++i) {
      worst = std::max(worst, std::abs(back.samples()[i] - x[i]));
    }
  }
  const double secs = Seconds(start);
  return {worst < kRoundTripTol && secs < kRoundTripBudgetS,
          Fmt("100 clips, max interior error %.3g (< %.0e), %.2f s (< %.0f s)", worst,
              kRoundTripTol, secs, kRoundTripBudgetS)};
}

// ---------------------------------------------------------------------------
// 2. Gradient oracle

Outcome GradientOracle() {
  const auto start = Clock::now();
  const auto checks = RunStandardGradChecks(7);
  bool ok = checks.size() == 3;
  std::ostringstream detail;
  for (const auto& c : checks) {
    ok = ok && c.result.max_relative_error < kGradTol &&
         c.result.max_absolute_error < kGradAbsTol &&
         c.result.coordinates_checked >= kGradMinCoordinates;
    detail << c.name << " " << Fmt("%.2e", c.result.max_relative_error) << " over "
           << c.result.coordinates_checked << " (near-zero abs "
           << Fmt("%.1e", c.result.max_absolute_error) << " over " << c.result.small_checked
           << ", kinks skipped " << c.result.kinks_skipped << "); ";
  }
  const double secs = Seconds(start);
  ok = ok && secs < kGradBudgetS;
  detail << Fmt("%.2f s (< %.0f s)", secs, kGradBudgetS);
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. Mask invariants

template <typename T>
T Ulp(T x) {
  return std::nextafter(x, std::numeric_limits<T>::infinity()) - x;
}

template <typename T>
bool Conserves(const SeparatedPair<T>& p, const Matrix<T>& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const T sum = p.vocal.data()[i] + p.music.data()[i];
    if (std::abs(sum - z.data()[i]) > kMaskUlps * Ulp(z.data()[i])) return false;
  }
  return true;
}

Outcome MaskInvariants() {
  SplitMix64 rng(33);
  constexpr Eigen::Index kBins = 8;
  int range_fail = 0, conserve_fail = 0, equivariance_fail = 0, invariance_fail = 0;
  int invariance_cases = 0;
  double worst_invariance = 0;
  auto magnitude = [&] {
    const double u = rng.Uniform();
    return u < 0.05 ? 0.0 : std::pow(10.0, rng.Uniform(-4.0, 3.0));
  };
  for (int c = 0; c < kMaskCases; ++c) {
    Matrix<double> a(1, kBins), b(1, kBins), z(1, kBins);
    for (Eigen::Index j = 0; j < kBins; ++j) {
      a(0, j) = magnitude();
      b(0, j) = magnitude();
      z(0, j) = magnitude();
    }
    const SeparatedPair<double> p = MaskLayerForward(a, b, z);
    if (p.mask.minCoeff() < 0.0 || p.mask.maxCoeff() > 1.0) ++range_fail;
    if (!Conserves(p, z)) ++conserve_fail;
    const Matrix<float> af = a.cast<float>(), bf = b.cast<float>(), zf = z.cast<float>();
    if (!Conserves(MaskLayerForward(af, bf, zf), zf)) ++conserve_fail;

    const double cz = rng.Uniform(0.0, 100.0);
    const SeparatedPair<double> q = MaskLayerForward(a, b, Matrix<double>(cz * z));
    const double tol = 1e-12 * (1.0 + cz * z.maxCoeff());
    if ((q.vocal - cz * p.vocal).cwiseAbs().maxCoeff() > tol ||
        (q.music - cz * p.music).cwiseAbs().maxCoeff() > tol) {
      ++equivariance_fail;
    }

    // Raw-output scaling: only bins where the floor is negligible against the
    // raw sum at both scales are held to the tolerance.
    const double cr = std::pow(10.0, rng.Uniform(std::log10(kMaskMinScale), 3.0));
    const Matrix<double> m1 = SoftMask(a, b);
    const Matrix<double> m2 = SoftMask(Matrix<double>(cr * a), Matrix<double>(cr * b));
    for (Eigen::Index j = 0; j < kBins; ++j) {
      if (kMaskFloor / (std::min(cr, 1.0) * (a(0, j) + b(0, j))) > kMaskScaleTol) continue;
      ++invariance_cases;
      const double d = std::abs(m1(0, j) - m2(0, j));
      worst_invariance = std::max(worst_invariance, d);
      if (d >= kMaskScaleTol) ++invariance_fail;
    }
  }
  const bool ok = range_fail + conserve_fail + equivariance_fail + invariance_fail == 0 &&
                  invariance_cases >= kMaskCases;
  return {ok, Fmt("%d cases x %d bins: range %d, conservation %d (%d ulps, f64+f32), "
                  "z-equivariance %d, raw-scale %d of %d bins (worst %.2e, c >= %.0e) failures",
                  kMaskCases, static_cast<int>(kBins), range_fail, conserve_fail, kMaskUlps,
                  equivariance_fail, invariance_fail, invariance_cases, worst_invariance,
                  kMaskMinScale)};
}

// ---------------------------------------------------------------------------
// 4. BSS-Eval oracle equivalence

Eigen::MatrixXd DelayMatrix(const std::vector<std::vector<double>>& refs,
                            const std::vector<std::size_t>& which, int taps) {
  const auto n = static_cast<Eigen::Index>(refs.front().size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + taps - 1, static_cast<Eigen::Index>(which.size()) * taps);
  Eigen::Index col = 0;
  for (std::size_t j : which) {
    for (int k = 0; k < taps; ++k, ++col) {
      for (Eigen::Index t = 0; t < n; ++t) a(t + k, col) = refs[j][static_cast<std::size_t>(t)];
    }
  }
  return a;
}

Eigen::VectorXd Project(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a * a.colPivHouseholderQr().solve(y);
}

Outcome BssEvalOracle() {
  SplitMix64 rng(44);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(16 + rng.Below(241));
    const int taps = 1 + static_cast<int>(rng.Below(16));
    std::vector<std::vector<double>> refs(2, std::vector<double>(n));
    std::vector<double> est(n);
    for (auto& r : refs) for (auto& v : r) v = rng.Uniform(-1, 1);
    for (std::size_t t = 0; t < n; ++t) est[t] = 0.7 * refs[0][t] + 0.3 * rng.Uniform(-1, 1);
    const std::size_t source = rng.Below(2);
    const Decomposition fast = Decompose(est, refs, source, taps);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) + taps - 1);
    for (std::size_t t = 0; t < n; ++t) e[static_cast<Eigen::Index>(t)] = est[t];
    const Eigen::VectorXd target = Project(DelayMatrix(refs, {source}, taps), e);
    const Eigen::VectorXd both = Project(DelayMatrix(refs, {0, 1}, taps), e);
    for (Eigen::Index t = 0; t < e.size(); ++t) {
      const auto i = static_cast<std::size_t>(t);
      worst = std::max({worst, std::abs(fast.target[i] - target[t]),
                        std::abs(fast.interference[i] - (both[t] - target[t])),
                        std::abs(fast.artifact[i] - (e[t] - both[t]))});
    }
  }

  std::vector<std::vector<double>> refs(2, std::vector<double>(256));
  for (auto& r : refs) for (auto& v : r) v = rng.Uniform(-1, 1);
  const int taps = 8;
  for (auto& r : refs) std::fill(r.end() - taps, r.end(), 0.0);
  const SourceScores perfect = Scores(Decompose(refs[0], refs, 0, taps));
  const bool capped = perfect.sdr == kScoreCapDb && perfect.sir == kScoreCapDb &&
                      perfect.sar == kScoreCapDb;

  // Reference plus an artifact orthogonal to every delayed reference, with
  // a 10:1 target-to-artifact energy ratio.
  const Eigen::MatrixXd span = DelayMatrix(refs, {0, 1}, taps).topRows(256);
  Eigen::VectorXd noise(256);
  for (auto& v : noise) v = rng.Uniform(-1, 1);
  Eigen::VectorXd orth = noise - Project(span, noise);
  double target_energy = 0;
  for (double v : refs[0]) target_energy += v * v;
  orth *= std::sqrt(target_energy / 10.0 / orth.squaredNorm());
  std::vector<double> est = refs[0];
  for (std::size_t t = 0; t < 256; ++t) est[t] += orth[static_cast<Eigen::Index>(t)];
  const double sdr = Scores(Decompose(est, refs, 0, taps)).sdr;

  const bool ok = worst < kBssTol && capped && std::abs(sdr - 10.0) <= kBssTenToOneTolDb;
  return {ok, Fmt("50 random cases n <= 256, L <= 16: max deviation from dense QR %.2e (< %.0e); "
                  "perfect estimate %.0f/%.0f/%.0f dB; 10:1 case SDR %.5f dB",
                  worst, kBssTol, perfect.sdr, perfect.sir, perfect.sar, sdr)};
}

// ---------------------------------------------------------------------------
// Synthetic suite shared by criteria 5, 6 and 8.

struct Suite {
  std::filesystem::path dir;
  std::vector<ClipRecord> all;
  std::vector<ClipRecord> train;
  std::vector<ClipRecord> test;
  RunConfig config;
  std::optional<TrainedModels> pretrained;
  double setup_seconds = 0;
};

Suite MakeSuite() {
  const auto start = Clock::now();
  Suite s;
  s.dir = std::filesystem::temp_directory_path() / "voicesep_acceptance";
  std::filesystem::remove_all(s.dir);
  WriteSyntheticDataset(s.dir / "data", SynthOptions{});
  s.config.filter_length = kEvalFilterLength;
  s.all = Ingest(s.dir / "data", s.config.channels, s.config.sample_rate);
  auto [train, test] = Split(s.all, s.config.split_fraction, s.config.split_seed);
  s.train = std::move(train);
  s.test = std::move(test);
  s.setup_seconds = Seconds(start);
  return s;
}

std::array<SourceScores, 2> Mean(const std::vector<ClipScores>& scores) {
  return AggregateScores(scores, Aggregate::kWeightedMean);
}

// ---------------------------------------------------------------------------
// 5. Synthetic end-to-end

std::vector<ClipScores> pretrained_scores;

Outcome SyntheticEndToEnd(Suite& s) {
  const auto start = Clock::now();
  if (s.all.size() != 64) return {false, Fmt("expected 64 clips, found %zu", s.all.size())};
  if (s.config.schedule.pretrain_epochs > kMaxPretrainEpochs) return {false, "too many epochs"};
  s.pretrained = TrainModels(s.train, s.test, s.config, true);
  const double train_seconds = Seconds(start);
  const auto& curve = s.pretrained->pretrain_curve;

  pretrained_scores = EvaluateModel(s.pretrained->generator, s.test, s.pretrained->normalization_scale,
                                    s.config);
  const std::vector<ClipScores> ibm = EvaluateOracle(s.test, OracleMask::kIdealBinary, s.config);
  int ordered = 0;
  double closest = std::numeric_limits<double>::infinity();
  double min_sdr = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ibm.size(); ++i) {
    bool clip_ok = true;
    for (std::size_t src = 0; src < 2; ++src) {
      const double gap = ibm[i].sources[src].sdr - pretrained_scores[i].sources[src].sdr;
      closest = std::min(closest, gap);
      min_sdr = std::min(min_sdr, pretrained_scores[i].sources[src].sdr);
      clip_ok = clip_ok && gap > 0.0;
    }
    ordered += clip_ok ? 1 : 0;
  }
  const auto model = Mean(pretrained_scores);
  const auto oracle = Mean(ibm);
  const double secs = Seconds(start) + s.setup_seconds;
  const bool ok = model[0].sdr >= kMinHeldoutSdrDb && model[1].sdr >= kMinHeldoutSdrDb &&
                  ordered == static_cast<int>(ibm.size()) && secs < kEndToEndBudgetS;
  return {ok, Fmt("%zu train / %zu test clips, %d epochs, J %.4g -> %.4g; held-out SDR vocal "
                  "%.2f, music %.2f dB (>= %.0f; worst clip %.2f); IBM %.2f / %.2f dB, "
                  "IBM > model on %d/%zu clips (smallest gap %.2f dB); L = %d; %.0f s "
                  "(train %.0f s, < %.0f s)",
                  s.train.size(), s.test.size(), s.config.schedule.pretrain_epochs,
                  curve.front(), curve.back(), model[0].sdr, model[1].sdr, kMinHeldoutSdrDb,
                  min_sdr, oracle[0].sdr, oracle[1].sdr, ordered, ibm.size(), closest,
                  s.config.filter_length, secs, train_seconds, kEndToEndBudgetS)};
}

// ---------------------------------------------------------------------------
// 6. Adversarial phase sanity

Outcome AdversarialSanity(Suite& s) {
  if (!s.pretrained) return {false, "no pretrained generator"};
  const auto start = Clock::now();
  DenseNet<float> g = s.pretrained->generator;
  const double scale = s.pretrained->normalization_scale;
  const FrameSet train = FeaturizeAll(s.train, scale, s.config.frame_size, s.config.hop);
  const FrameSet held = SubsampleFrames(
      FeaturizeAll(s.test, scale, s.config.frame_size, s.config.hop), kMaxHeldoutFrames);
  DenseNet<float> d = MakeDiscriminator(GanVariant::kVBM, s.config.bins(),
                                        s.config.discriminator_hidden,
                                        s.config.discriminator_seed);
  TrainingSchedule schedule = s.config.schedule;
  schedule.adversarial_epochs = kAdversarialEpochs;
  const auto diag = AdversarialTrain(g, d, GanVariant::kVBM, train, held, schedule);
  const auto after = Mean(EvaluateModel(g, s.test, scale, s.config));
  const auto before = Mean(pretrained_scores);
  const double accuracy = diag.back().d_accuracy;
  const double secs = Seconds(start);
  const bool ok = diag.size() == static_cast<std::size_t>(kAdversarialEpochs) &&
                  after[0].sdr >= before[0].sdr - kMaxSdrDropDb &&
                  after[1].sdr >= before[1].sdr - kMaxSdrDropDb && accuracy >= kAccuracyLow &&
                  accuracy <= kAccuracyHigh && secs < kEndToEndBudgetS;
  return {ok, Fmt("%d VBM epochs: SDR vocal %.2f -> %.2f, music %.2f -> %.2f dB (max drop %.0f); "
                  "held-out D accuracy %.3f in [%.2f, %.2f]; final d_loss %.4f g_loss %.4f; "
                  "%.0f s (< %.0f s)",
                  kAdversarialEpochs, before[0].sdr, after[0].sdr, before[1].sdr, after[1].sdr,
                  kMaxSdrDropDb, accuracy, kAccuracyLow, kAccuracyHigh, diag.back().d_loss,
                  diag.back().g_loss, secs, kEndToEndBudgetS)};
}

// ---------------------------------------------------------------------------
// 7. Variant plumbing

Outcome VariantPlumbing(const Suite& s) {
  RunConfig c = s.config;
  c.generator_hidden = {64, 64};
  c.discriminator_hidden = {32};
  c.schedule.pretrain_epochs = 2;
  c.schedule.adversarial_epochs = 2;
  const std::vector<ClipRecord> train(s.train.begin(), s.train.begin() + 4);
  const std::vector<ClipRecord> held(s.test.begin(), s.test.begin() + 2);
  const Eigen::Index f = c.bins();
  std::ostringstream detail;
  bool ok = true;
  std::vector<Eigen::Index> widths;
  for (GanVariant v : {GanVariant::kVB, GanVariant::kVM, GanVariant::kVBM}) {
    c.variant = v;
    const TrainedModels a = TrainModels(train, held, c, false);
    const TrainedModels b = TrainModels(train, held, c, false);
    const bool same = EncodeCheckpoint(a.generator) == EncodeCheckpoint(b.generator) &&
                      EncodeCheckpoint(*a.discriminator) == EncodeCheckpoint(*b.discriminator);
    const Eigen::Index width = a.discriminator->input_width();
    widths.push_back(width);
    ok = ok && same && a.adversarial.size() == 2 &&
         width == DiscriminatorInputWidth(v, f);
    detail << VariantName(v) << " width " << width << (same ? " reproducible" : " NOT reproducible")
           << "; ";
  }
  ok = ok && widths == std::vector<Eigen::Index>{2 * f, 2 * f, 3 * f};
  detail << "F = " << f;
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Conservation end to end

Outcome Conservation(const Suite& s) {
  if (!s.pretrained) return {false, "no pretrained generator"};
  double worst = 0;
  for (const auto& clip : s.all) {
    const SeparationResult r = Separate(s.pretrained->generator, clip.mixture,
                                        s.pretrained->normalization_scale, s.config.frame_size,
                                        s.config.hop);
    if (r.vocal.num_frames() != clip.mixture.num_frames()) return {false, "length changed"};
    for (std::size_t i = 0; i < r.vocal.num_frames(); ++i) {
      worst = std::max(worst, std::abs(r.vocal.samples()[i] + r.music.samples()[i] -
                                       clip.mixture.samples()[i]));
    }
  }
  return {worst < kConservationTol,
          Fmt("%zu clips, max |vocal + music - mixture| = %.3g (< %.0e)", s.all.size(), worst,
              kConservationTol)};
}

int Run() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "stft round trip", StftRoundTrip);
  report(2, "gradient oracle", GradientOracle);
  report(3, "mask invariants", MaskInvariants);
  report(4, "bss-eval oracle equivalence", BssEvalOracle);
  Suite suite = MakeSuite();
  report(5, "synthetic end-to-end", [&] { return SyntheticEndToEnd(suite); });
  report(6, "adversarial phase sanity", [&] { return AdversarialSanity(suite); });
  report(7, "variant plumbing", [&] { return VariantPlumbing(suite); });
  report(8, "conservation end-to-end", [&] { return Conservation(suite); });
  std::filesystem::remove_all(suite.dir);
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace voicesep

int main() { return voicesep::Run(); }
