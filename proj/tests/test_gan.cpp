// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "voicesep/checkpoint.hpp"
#include "voicesep/gan.hpp"
#include "voicesep/objectives.hpp"

namespace voicesep {
namespace {

using testing::ErrorKindOf;
using testing::RandomMatrix;

Matrix<double> Col(std::initializer_list<double> v) {
  Matrix<double> m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Matrix<double> Row(std::initializer_list<double> v) { return Col(v).transpose(); }

// Frames whose vocal sits in the lower half of the bins and music in the
// upper half; the mixture is their sum.
FrameSet BandFrames(std::size_t rows, Eigen::Index bins, std::uint64_t seed) {
  SplitMix64 rng(seed);
  FrameSet f;
  f.vocal = Matrix<float>::Zero(static_cast<Eigen::Index>(rows), bins);
  f.music = Matrix<float>::Zero(static_cast<Eigen::Index>(rows), bins);
  for (Eigen::Index r = 0; r < f.vocal.rows(); ++r) {
    for (Eigen::Index c = 0; c < bins; ++c) {
      const auto v = static_cast<float>(rng.Uniform(0.2, 1.0));
      (c < bins / 2 ? f.vocal : f.music)(r, c) = v;
    }
    f.clip_ids.push_back("c");
    f.frame_indices.push_back(static_cast<int>(r));
  }
  f.mixture = f.vocal + f.music;
  return f;
}

TEST_CASE("variant names and widths") {
  CHECK(VariantName(GanVariant::kVB) == "vb");
  CHECK(VariantName(GanVariant::kVM) == "vm");
  CHECK(VariantName(GanVariant::kVBM) == "vbm");
  CHECK(ParseVariant("vbm") == GanVariant::kVBM);
  CHECK(ParseVariant("vm") == GanVariant::kVM);
  CHECK(ParseVariant("vb") == GanVariant::kVB);
  CHECK(ErrorKindOf([] { ParseVariant("vx"); }) == ErrorKind::kParameter);
  CHECK(DiscriminatorInputWidth(GanVariant::kVB, 513) == 1026);
  CHECK(DiscriminatorInputWidth(GanVariant::kVM, 513) == 1026);
  CHECK(DiscriminatorInputWidth(GanVariant::kVBM, 513) == 1539);
  const std::vector<int> hidden{8};
  for (auto v : {GanVariant::kVB, GanVariant::kVM, GanVariant::kVBM}) {
    const auto d = MakeDiscriminator(v, 5, hidden, 1);
    CHECK(d.input_width() == DiscriminatorInputWidth(v, 5));
    CHECK(d.output_width() == 1);
    CHECK(d.layers.back().activation == Activation::kSigmoid);
  }
}

TEST_CASE("BuildDiscriminatorInput concatenation order") {
  const Matrix<double> y1 = Row({1, 2}), y2 = Row({3, 4}), z = Row({5, 6});
  CHECK(BuildDiscriminatorInput(GanVariant::kVBM, y1, y2, z) == Row({1, 2, 3, 4, 5, 6}));
  CHECK(BuildDiscriminatorInput(GanVariant::kVB, y1, y2, z) == Row({1, 2, 3, 4}));
  CHECK(BuildDiscriminatorInput(GanVariant::kVB, y1, y2, Row({9, 9})) == Row({1, 2, 3, 4}));
  CHECK(BuildDiscriminatorInput(GanVariant::kVM, y1, y2, z) == Row({1, 2, 5, 6}));
  CHECK(ErrorKindOf([&] {
          BuildDiscriminatorInput(GanVariant::kVBM, y1, Row({1}), z);
        }) == ErrorKind::kShape);
}

TEST_CASE("discriminator gradient never reaches the mixture columns") {
  // Gradient only on the z block: nothing may come back.
  const auto vbm = RouteDiscriminatorGradient(GanVariant::kVBM, Row({0, 0, 0, 0, 7, 8}), 2);
  CHECK(vbm.vocal.isZero());
  CHECK(vbm.music.isZero());
  const auto vm = RouteDiscriminatorGradient(GanVariant::kVM, Row({1, 2, 7, 8}), 2);
  CHECK(vm.vocal == Row({1, 2}));
  CHECK(vm.music.isZero());
  const auto vb = RouteDiscriminatorGradient(GanVariant::kVB, Row({1, 2, 3, 4}), 2);
  CHECK(vb.vocal == Row({1, 2}));
  CHECK(vb.music == Row({3, 4}));
  CHECK(ErrorKindOf([] {
          RouteDiscriminatorGradient(GanVariant::kVBM, Row({1, 2, 3, 4}), 2);
        }) == ErrorKind::kShape);
}

TEST_CASE("discriminator loss values") {
  CHECK(DiscriminatorLoss(Col({0.5}), Col({0.5})).loss ==
        doctest::Approx(2 * std::numbers::ln2).epsilon(1e-12));
  CHECK(DiscriminatorLoss(Col({0.9}), Col({0.1})).loss ==
        doctest::Approx(-2 * std::log(0.9)).epsilon(1e-12));
  CHECK(DiscriminatorLoss(Col({0.9}), Col({0.1})).loss == doctest::Approx(0.2107).epsilon(1e-4));
  const double floor = DiscriminatorLoss(Col({1.0}), Col({0.0})).loss;
  CHECK(floor >= 0.0);
  CHECK(floor < 1e-6);
  CHECK(ErrorKindOf([] {
          DiscriminatorLoss(Col({std::numeric_limits<double>::quiet_NaN()}), Col({0.5}));
        }) == ErrorKind::kTraining);
}

TEST_CASE("generator log-D loss values") {
  CHECK(GeneratorLogDLoss(Col({0.5})).loss == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  CHECK(GeneratorLogDLoss(Col({0.25, 0.25})).loss ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(GeneratorLogDLoss(Col({1.0})).loss < 1e-6);
  CHECK(GeneratorLogDLoss(Col({0.0})).loss == doctest::Approx(-std::log(1e-7)));
  CHECK(ErrorKindOf([] {
          GeneratorLogDLoss(Col({std::numeric_limits<double>::infinity()}));
        }) == ErrorKind::kTraining);
}

TEST_CASE("loss gradients are those of the mean log") {
  const auto l = DiscriminatorLoss(Col({0.8, 0.6}), Col({0.3, 0.1}));
  CHECK(l.grad_real(0, 0) == doctest::Approx(-1.0 / (2 * 0.8)));
  CHECK(l.grad_fake(1, 0) == doctest::Approx(1.0 / (2 * 0.9)));
  const auto g = GeneratorLogDLoss(Col({0.4}));
  CHECK(g.grad_fake(0, 0) == doctest::Approx(-1.0 / 0.4));
}

TEST_CASE("property: adversarial losses are finite and nonnegative") {
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    const double q = 1.0 - p;
    const auto d = DiscriminatorLoss(Col({p}), Col({q}));
    const auto g = GeneratorLogDLoss(Col({p}));
    REQUIRE(std::isfinite(d.loss));
    REQUIRE(d.loss >= 0.0);
    REQUIRE(std::isfinite(g.loss));
    REQUIRE(g.loss >= 0.0);
    REQUIRE(std::isfinite(d.grad_real(0, 0)));
    REQUIRE(std::isfinite(d.grad_fake(0, 0)));
  }
}

TEST_CASE("property: indistinguishable inputs are optimal at 0.5") {
  const double best = 2 * std::numbers::ln2;
  for (int i = 1; i < 1000; ++i) {
    const double d = i / 1000.0;
    const double loss = DiscriminatorLoss(Col({d}), Col({d})).loss;
    if (i == 500) {
      CHECK(loss == doctest::Approx(best).epsilon(1e-14));
    } else {
      REQUIRE(loss > best);
    }
  }
}

TEST_CASE("one discriminator step decreases its loss for small learning rates") {
  SplitMix64 rng(71);
  LossProblem p;
  p.tag = LossTag::kBce;
  p.inputs = RandomMatrix(rng, 16, 6, 0.0, 1.0);
  p.fake_inputs = RandomMatrix(rng, 16, 6, 0.0, 1.0);
  const Objective objective = MakeObjective(p);
  const auto d0 = InitMlp<double>(std::vector<int>{6, 8, 1}, Activation::kSigmoid, 5);
  Gradients<double> grads;
  const double before = objective(d0, &grads);
  for (double lr : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    auto d = d0;
    auto state = MakeAdamState(d, AdamConfig{lr, 0.5, 0.999, 1e-8});
    AdamStep(d, grads, state);
    INFO("lr " << lr);
    CHECK(objective(d, nullptr) < before);
  }
}

TEST_CASE("schedule validation") {
  TrainingSchedule s;
  CHECK_NOTHROW(s.Validate());
  s.pretrain_epochs = 0;
  s.adversarial_epochs = 0;
  CHECK_NOTHROW(s.Validate());
  s.batch_size = 0;
  CHECK(ErrorKindOf([&] { s.Validate(); }) == ErrorKind::kParameter);
  s = TrainingSchedule{};
  s.pretrain_epochs = -1;
  CHECK(ErrorKindOf([&] { s.Validate(); }) == ErrorKind::kParameter);
  s = TrainingSchedule{};
  s.d_steps_per_g_step = 0;
  CHECK(ErrorKindOf([&] { s.Validate(); }) == ErrorKind::kParameter);
  s = TrainingSchedule{};
  s.pretrain_adam.learning_rate = -1;
  CHECK(ErrorKindOf([&] { s.Validate(); }) == ErrorKind::kParameter);
}

TEST_CASE("generator output biases start positive") {
  const std::vector<int> hidden{4, 4};
  const auto g = MakeGenerator(3, hidden, 1);
  CHECK(g.input_width() == 3);
  CHECK(g.output_width() == 6);
  CHECK(g.layers.back().activation == Activation::kRelu);
  CHECK((g.layers.back().bias.array() == kGeneratorOutputBias).all());
  CHECK(g.layers.front().bias.isZero());
}

TEST_CASE("pretraining with zero epochs is the identity") {
  const FrameSet data = BandFrames(40, 8, 1);
  const std::vector<int> hidden{16};
  auto g = MakeGenerator(8, hidden, 3);
  const auto before = g;
  TrainingSchedule s;
  s.pretrain_epochs = 0;
  CHECK(Pretrain(g, data, s).empty());
  CHECK(g == before);
}

TEST_CASE("pretraining reduces the loss and is deterministic") {
  const FrameSet data = BandFrames(256, 8, 2);
  const std::vector<int> hidden{32, 32};
  TrainingSchedule s;
  s.pretrain_epochs = 15;
  s.batch_size = 16;
  s.pretrain_adam.learning_rate = 1e-3;
  auto g1 = MakeGenerator(8, hidden, 3);
  auto g2 = MakeGenerator(8, hidden, 3);
  const auto c1 = Pretrain(g1, data, s);
  const auto c2 = Pretrain(g2, data, s);
  REQUIRE(c1.size() == 15);
  CHECK(c1 == c2);
  CHECK(g1 == g2);
  CHECK(c1.back() < 0.1 * c1.front());
}

TEST_CASE("pretraining rejects mismatched data") {
  const FrameSet data = BandFrames(10, 8, 2);
  const std::vector<int> hidden{4};
  auto g = MakeGenerator(6, hidden, 3);
  CHECK(ErrorKindOf([&] { Pretrain(g, data, TrainingSchedule{}); }) == ErrorKind::kShape);
  CHECK(ErrorKindOf([&] { Pretrain(g, FrameSet{}, TrainingSchedule{}); }) ==
        ErrorKind::kParameter);
}

TEST_CASE("a trainable discriminator separates a frozen generator") {
  const FrameSet train = BandFrames(256, 8, 5);
  const FrameSet held = BandFrames(128, 8, 6);
  const std::vector<int> g_hidden{16};
  const std::vector<int> d_hidden{32, 32};
  auto g = MakeGenerator(8, g_hidden, 1);
  const auto g_before = g;
  auto d = MakeDiscriminator(GanVariant::kVBM, 8, d_hidden, 2);
  TrainingSchedule s;
  s.adversarial_epochs = 20;
  s.batch_size = 32;
  s.update_generator = false;
  s.discriminator_adam.learning_rate = 1e-3;
  const auto diag = AdversarialTrain(g, d, GanVariant::kVBM, train, held, s);
  REQUIRE(diag.size() == 20);
  CHECK(g == g_before);
  CHECK(diag.back().d_accuracy >= 0.95);
  CHECK(diag.back().d_loss < diag.front().d_loss);
  for (const auto& row : diag) {
    CHECK(std::isfinite(row.d_loss));
    CHECK(std::isfinite(row.g_loss));
    CHECK(row.wallclock_ms >= 0.0);
  }
}

TEST_CASE("adversarial training is bit-reproducible") {
  const FrameSet train = BandFrames(96, 8, 7);
  const FrameSet held = BandFrames(32, 8, 8);
  const std::vector<int> hidden{16};
  TrainingSchedule s;
  s.adversarial_epochs = 3;
  s.batch_size = 16;
  auto run = [&](std::string* g_bytes, std::string* d_bytes) {
    auto g = MakeGenerator(8, hidden, 1);
    auto d = MakeDiscriminator(GanVariant::kVM, 8, hidden, 2);
    const auto diag = AdversarialTrain(g, d, GanVariant::kVM, train, held, s);
    *g_bytes = EncodeCheckpoint(g);
    *d_bytes = EncodeCheckpoint(d);
    return diag;
  };
  std::string g1, d1, g2, d2;
  const auto a = run(&g1, &d1);
  const auto b = run(&g2, &d2);
  CHECK(g1 == g2);
  CHECK(d1 == d2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].d_loss == b[i].d_loss);
    CHECK(a[i].g_loss == b[i].g_loss);
    CHECK(a[i].d_accuracy == b[i].d_accuracy);
  }
}

TEST_CASE("adversarial training checks the discriminator width") {
  const FrameSet train = BandFrames(16, 8, 7);
  const std::vector<int> hidden{4};
  auto g = MakeGenerator(8, hidden, 1);
  auto d = MakeDiscriminator(GanVariant::kVB, 8, hidden, 2);
  CHECK(ErrorKindOf([&] {
          AdversarialTrain(g, d, GanVariant::kVBM, train, train, TrainingSchedule{});
        }) == ErrorKind::kShape);
}

TEST_CASE("discriminator accuracy counts both sides") {
  const FrameSet held = BandFrames(10, 4, 9);
  const std::vector<int> hidden{4};
  const auto g = MakeGenerator(4, hidden, 1);
  auto d = MakeDiscriminator(GanVariant::kVB, 4, hidden, 2);
  // A constant discriminator gets exactly one side right.
  for (auto& layer : d.layers) layer.weight.setZero();
  d.layers.back().bias.setConstant(5.0f);
  CHECK(DiscriminatorAccuracy(g, d, GanVariant::kVB, held) == 0.5);
  d.layers.back().bias.setConstant(-5.0f);
  CHECK(DiscriminatorAccuracy(g, d, GanVariant::kVB, held) == 0.5);
}

}  // namespace
}  // namespace voicesep
