// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/bss_eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <json.hpp>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

using Spectrum = std::vector<std::complex<double>>;

class Correlator {
 public:
  explicit Correlator(std::size_t fft_size) : size_(fft_size) {}

  Spectrum Transform(std::span<const double> x) {
    std::vector<double> padded(size_, 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    Spectrum out;
    fft_.fwd(out, padded);
    return out;
  }

  // c[tau] = sum_s a[s] b[s + tau] for tau in [0, lags), plus the negative
  // lags when `negative` is set (returned at index lags - 1 + tau).
  std::vector<double> Correlate(const Spectrum& a, const Spectrum& b, std::size_t lags,
                                bool negative) {
    Spectrum prod(size_);
    for (std::size_t i = 0; i < size_; ++i) prod[i] = std::conj(a[i]) * b[i];
    std::vector<double> circ;
    fft_.inv(circ, prod);
    if (!negative) return {circ.begin(), circ.begin() + static_cast<std::ptrdiff_t>(lags)};
    std::vector<double> out(2 * lags - 1);
    for (std::size_t k = 0; k < 2 * lags - 1; ++k) {
      const auto tau = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(lags - 1);
      out[k] = circ[static_cast<std::size_t>((tau + static_cast<std::ptrdiff_t>(size_)) %
                                             static_cast<std::ptrdiff_t>(size_))];
    }
    return out;
  }

  // Linear convolution of a length-`coeffs` filter with a spectrum-held signal.
  std::vector<double> Filter(const Spectrum& x, std::span<const double> coeffs,
                             std::size_t length) {
    const Spectrum h = Transform(coeffs);
    Spectrum prod(size_);
    for (std::size_t i = 0; i < size_; ++i) prod[i] = x[i] * h[i];
    std::vector<double> y;
    fft_.inv(y, prod);
    y.resize(length);
    return y;
  }

 private:
  std::size_t size_;
  Eigen::FFT<double> fft_;
};

// Solves (G + ridge I) c = b; G symmetric positive semi-definite.
Eigen::VectorXd SolveNormal(Eigen::MatrixXd gram, const Eigen::VectorXd& rhs) {
  gram.diagonal().array() += kGramRidge;
  if (!gram.allFinite() || !rhs.allFinite()) {
    Fail(ErrorKind::kNumerical, "non-finite Gram system");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
    Fail(ErrorKind::kNumerical, "Gram matrix is singular beyond the ridge");
  }
  Eigen::VectorXd c = ldlt.solve(rhs);
  if (!c.allFinite()) Fail(ErrorKind::kNumerical, "projection solve produced non-finite values");
  return c;
}

}  // namespace

Decomposition Decompose(std::span<const double> estimate,
                        std::span<const std::vector<double>> references, std::size_t source,
                        int filter_length) {
  if (filter_length < 1) Fail(ErrorKind::kParameter, "filter length must be at least 1");
  if (references.empty() || source >= references.size()) {
    Fail(ErrorKind::kParameter, "source index out of range");
  }
  const std::size_t n = estimate.size();
  for (const auto& r : references) {
    if (r.size() != n) Fail(ErrorKind::kShape, "estimate and references differ in length");
  }
  const auto lags = static_cast<std::size_t>(filter_length);
  const std::size_t padded = n + lags - 1;
  const std::size_t count = references.size();
  const std::size_t fft_size = std::bit_ceil(std::max<std::size_t>(2, n + lags));

  Correlator corr(fft_size);
  std::vector<Spectrum> spectra;
  for (const auto& r : references) spectra.push_back(corr.Transform(r));
  const Spectrum est = corr.Transform(estimate);

  // Block (i, j) of the Gram matrix: G[(i,k),(j,l)] = xc_ij[k - l].
  const auto dim = static_cast<Eigen::Index>(count * lags);
  Eigen::MatrixXd gram(dim, dim);
  Eigen::VectorXd rhs(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      const std::vector<double> xc = corr.Correlate(spectra[i], spectra[j], lags, true);
      for (std::size_t k = 0; k < lags; ++k) {
        for (std::size_t l = 0; l < lags; ++l) {
          const double v = xc[lags - 1 + k - l];
          gram(static_cast<Eigen::Index>(i * lags + k), static_cast<Eigen::Index>(j * lags + l)) = v;
          gram(static_cast<Eigen::Index>(j * lags + l), static_cast<Eigen::Index>(i * lags + k)) = v;
        }
      }
    }
    const std::vector<double> b = corr.Correlate(spectra[i], est, lags, false);
    for (std::size_t k = 0; k < lags; ++k) rhs[static_cast<Eigen::Index>(i * lags + k)] = b[k];
  }

  const auto block = static_cast<Eigen::Index>(source * lags);
  const auto l = static_cast<Eigen::Index>(lags);
  const Eigen::VectorXd c_target =
      SolveNormal(gram.block(block, block, l, l), rhs.segment(block, l));
  const Eigen::VectorXd c_all = SolveNormal(gram, rhs);

  Decomposition d;
  d.target = corr.Filter(spectra[source], {c_target.data(), lags}, padded);
  std::vector<double> all(padded, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::vector<double> part =
        corr.Filter(spectra[i], {c_all.data() + i * lags, lags}, padded);
    for (std::size_t t = 0; t < padded; ++t) all[t] += part[t];
  }
  d.interference.resize(padded);
  d.artifact.resize(padded);
  for (std::size_t t = 0; t < padded; ++t) {
    const double e = t < n ? estimate[t] : 0.0;
    d.interference[t] = all[t] - d.target[t];
    d.artifact[t] = e - all[t];
  }
  return d;
}

double RatioDb(double numerator_energy, double denominator_energy) {
  if (!(numerator_energy > 0.0)) return -kScoreCapDb;
  if (!(denominator_energy > 0.0)) return kScoreCapDb;
  return std::clamp(10.0 * std::log10(numerator_energy / denominator_energy), -kScoreCapDb,
                    kScoreCapDb);
}

SourceScores Scores(const Decomposition& d) {
  double target = 0, interf = 0, artif = 0, distortion = 0, projected = 0;
  for (std::size_t t = 0; t < d.target.size(); ++t) {
    target += d.target[t] * d.target[t];
    interf += d.interference[t] * d.interference[t];
    artif += d.artifact[t] * d.artifact[t];
    const double e = d.interference[t] + d.artifact[t];
    distortion += e * e;
    const double p = d.target[t] + d.interference[t];
    projected += p * p;
  }
  return {RatioDb(target, distortion), RatioDb(target, interf), RatioDb(projected, artif)};
}

ClipScores EvaluateClip(const std::string& clip_id, double duration_seconds,
                        std::span<const std::vector<double>> estimates,
                        std::span<const std::vector<double>> references, int filter_length) {
  if (estimates.size() != 2 || references.size() != 2) {
    Fail(ErrorKind::kShape, "evaluation expects two estimates and two references");
  }
  ClipScores out;
  out.clip_id = clip_id;
  out.duration_seconds = duration_seconds;
  for (std::size_t s = 0; s < 2; ++s) {
    out.sources[s] = Scores(Decompose(estimates[s], references, s, filter_length));
  }
  return out;
}

namespace {

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::array<SourceScores, 2> AggregateScores(std::span<const ClipScores> clips, Aggregate how) {
  std::array<SourceScores, 2> out{};
  if (clips.empty()) return out;
  for (std::size_t s = 0; s < 2; ++s) {
    if (how == Aggregate::kMedian) {
      std::vector<double> sdr, sir, sar;
      for (const auto& c : clips) {
        sdr.push_back(c.sources[s].sdr);
        sir.push_back(c.sources[s].sir);
        sar.push_back(c.sources[s].sar);
      }
      out[s] = {Median(sdr), Median(sir), Median(sar)};
      continue;
    }
    double weight = 0;
    for (const auto& c : clips) {
      weight += c.duration_seconds;
      out[s].sdr += c.duration_seconds * c.sources[s].sdr;
      out[s].sir += c.duration_seconds * c.sources[s].sir;
      out[s].sar += c.duration_seconds * c.sources[s].sar;
    }
    if (weight <= 0) Fail(ErrorKind::kParameter, "clip durations sum to zero");
    out[s].sdr /= weight;
    out[s].sir /= weight;
    out[s].sar /= weight;
  }
  return out;
}

void WriteScoresCsv(const std::filesystem::path& path, std::span<const ClipScores> clips) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "clip_id,source,sdr,sir,sar,duration_s\n";
  out.precision(10);
  for (const auto& c : clips) {
    for (std::size_t s = 0; s < 2; ++s) {
      out << c.clip_id << ',' << kSourceNames[s] << ',' << c.sources[s].sdr << ','
          << c.sources[s].sir << ',' << c.sources[s].sar << ',' << c.duration_seconds << '\n';
    }
  }
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

void WriteScoresSummary(const std::filesystem::path& path, std::span<const ClipScores> clips,
                        Aggregate how) {
  const auto agg = AggregateScores(clips, how);
  nlohmann::json j;
  j["aggregate"] = how == Aggregate::kMedian ? "median" : "weighted-mean";
  j["clips"] = clips.size();
  double total = 0;
  for (const auto& c : clips) total += c.duration_seconds;
  j["total_duration_s"] = total;
  for (std::size_t s = 0; s < 2; ++s) {
    j["sources"][kSourceNames[s]] = {
        {"sdr", agg[s].sdr}, {"sir", agg[s].sir}, {"sar", agg[s].sar}};
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace voicesep
