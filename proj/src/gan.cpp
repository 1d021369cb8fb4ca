// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/gan.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "voicesep/error.hpp"

namespace voicesep {

std::string_view VariantName(GanVariant v) {
  switch (v) {
    case GanVariant::kVB: return "vb";
    case GanVariant::kVM: return "vm";
    case GanVariant::kVBM: return "vbm";
  }
  return "?";
}

GanVariant ParseVariant(std::string_view name) {
  if (name == "vb") return GanVariant::kVB;
  if (name == "vm") return GanVariant::kVM;
  if (name == "vbm") return GanVariant::kVBM;
  Fail(ErrorKind::kParameter, "unknown variant '" + std::string(name) + "'");
}

Eigen::Index DiscriminatorInputWidth(GanVariant v, Eigen::Index bins) {
  return v == GanVariant::kVBM ? 3 * bins : 2 * bins;
}

template <typename T>
Matrix<T> BuildDiscriminatorInput(GanVariant v, const Matrix<T>& vocal, const Matrix<T>& music,
                                  const Matrix<T>& mixture) {
  const Eigen::Index rows = vocal.rows();
  const Eigen::Index f = vocal.cols();
  if (music.rows() != rows || music.cols() != f || mixture.rows() != rows ||
      mixture.cols() != f) {
    Fail(ErrorKind::kShape, "discriminator input parts differ in shape");
  }
  Matrix<T> out(rows, DiscriminatorInputWidth(v, f));
  switch (v) {
    case GanVariant::kVB:
      out << vocal, music;
      break;
    case GanVariant::kVM:
      out << vocal, mixture;
      break;
    case GanVariant::kVBM:
      out << vocal, music, mixture;
      break;
  }
  return out;
}

template <typename T>
RawGradients<T> RouteDiscriminatorGradient(GanVariant v, const Matrix<T>& input_gradient,
                                           Eigen::Index bins) {
  if (input_gradient.cols() != DiscriminatorInputWidth(v, bins)) {
    Fail(ErrorKind::kShape, "discriminator gradient width does not match the variant");
  }
  RawGradients<T> g;
  g.vocal = input_gradient.leftCols(bins);
  if (v == GanVariant::kVM) {
    g.music = Matrix<T>::Zero(input_gradient.rows(), bins);
  } else {
    g.music = input_gradient.middleCols(bins, bins);
  }
  return g;
}

namespace {

template <typename T>
void CheckProbabilities(const Matrix<T>& d, const char* what) {
  if (d.cols() != 1) Fail(ErrorKind::kShape, std::string(what) + " must be B x 1");
  if (!d.allFinite()) Fail(ErrorKind::kTraining, std::string("non-finite ") + what);
}

template <typename T>
Matrix<T> Clamped(const Matrix<T>& d) {
  const T lo = static_cast<T>(kProbabilityClamp);
  return d.cwiseMax(lo).cwiseMin(T(1) - lo);
}

}  // namespace

template <typename T>
LossWithGradient<T> DiscriminatorLoss(const Matrix<T>& d_real, const Matrix<T>& d_fake) {
  CheckProbabilities(d_real, "D(real)");
  CheckProbabilities(d_fake, "D(fake)");
  if (d_real.rows() == 0 || d_fake.rows() == 0) {
    Fail(ErrorKind::kShape, "empty discriminator batch");
  }
  const Matrix<T> r = Clamped(d_real);
  const Matrix<T> f = Clamped(d_fake);
  const T nr = static_cast<T>(r.rows());
  const T nf = static_cast<T>(f.rows());
  LossWithGradient<T> out;
  out.loss = -r.array().log().sum() / nr - (T(1) - f.array()).log().sum() / nf;
  out.grad_real = (-T(1) / (nr * r.array())).matrix();
  out.grad_fake = (T(1) / (nf * (T(1) - f.array()))).matrix();
  return out;
}

template <typename T>
LossWithGradient<T> GeneratorLogDLoss(const Matrix<T>& d_fake) {
  CheckProbabilities(d_fake, "D(fake)");
  if (d_fake.rows() == 0) Fail(ErrorKind::kShape, "empty discriminator batch");
  const Matrix<T> f = Clamped(d_fake);
  const T nf = static_cast<T>(f.rows());
  LossWithGradient<T> out;
  out.loss = -f.array().log().sum() / nf;
  out.grad_fake = (-T(1) / (nf * f.array())).matrix();
  return out;
}

void TrainingSchedule::Validate() const {
  if (pretrain_epochs < 0 || adversarial_epochs < 0) {
    Fail(ErrorKind::kParameter, "epoch counts must be non-negative");
  }
  if (batch_size < 1) Fail(ErrorKind::kParameter, "batch size must be positive");
  if (d_steps_per_g_step < 1) {
    Fail(ErrorKind::kParameter, "d_steps_per_g_step must be at least 1");
  }
  for (const AdamConfig* c : {&pretrain_adam, &generator_adam, &discriminator_adam}) {
    if (!(c->learning_rate > 0) || !(c->beta1 >= 0 && c->beta1 < 1) ||
        !(c->beta2 >= 0 && c->beta2 < 1) || !(c->epsilon > 0)) {
      Fail(ErrorKind::kParameter, "invalid optimizer hyperparameters");
    }
  }
  if (!(adversarial_mse_weight >= 0)) {
    Fail(ErrorKind::kParameter, "adversarial_mse_weight must be non-negative");
  }
}

DenseNet<float> MakeDiscriminator(GanVariant v, Eigen::Index bins, std::span<const int> hidden,
                                  std::uint64_t seed) {
  std::vector<int> dims{static_cast<int>(DiscriminatorInputWidth(v, bins))};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  return InitMlp<float>(dims, Activation::kSigmoid, seed);
}

DenseNet<float> MakeGenerator(Eigen::Index bins, std::span<const int> hidden,
                              std::uint64_t seed) {
  std::vector<int> dims{static_cast<int>(bins)};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(static_cast<int>(2 * bins));
  DenseNet<float> net = InitMlp<float>(dims, Activation::kRelu, seed);
  // Zero output biases leave many relu mask units dead on every frame.
  net.layers.back().bias.setConstant(kGeneratorOutputBias);
  return net;
}

void WriteDiagnosticsCsv(const std::filesystem::path& path,
                         const std::vector<EpochDiagnostics>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "epoch,d_loss,g_loss,d_accuracy,wallclock_ms\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.epoch << ',' << r.d_loss << ',' << r.g_loss << ',' << r.d_accuracy << ','
        << r.wallclock_ms << '\n';
  }
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

#define VOICESEP_INSTANTIATE(T)                                                          \
  template Matrix<T> BuildDiscriminatorInput<T>(GanVariant, const Matrix<T>&,            \
                                                const Matrix<T>&, const Matrix<T>&);     \
  template RawGradients<T> RouteDiscriminatorGradient<T>(GanVariant, const Matrix<T>&,   \
                                                         Eigen::Index);                  \
  template LossWithGradient<T> DiscriminatorLoss<T>(const Matrix<T>&, const Matrix<T>&); \
  template LossWithGradient<T> GeneratorLogDLoss<T>(const Matrix<T>&);

VOICESEP_INSTANTIATE(float)
VOICESEP_INSTANTIATE(double)

#undef VOICESEP_INSTANTIATE

}  // namespace voicesep
