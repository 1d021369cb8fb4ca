// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_BSS_EVAL_HPP_
#define VOICESEP_BSS_EVAL_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace voicesep {

inline constexpr int kDefaultFilterLength = 512;
inline constexpr double kScoreCapDb = 100.0;
inline constexpr double kGramRidge = 1e-12;

/// Split of an estimate into target, interference and artifact parts.
/// The estimate is zero-padded by L-1 samples (the filters let a source be
/// delayed by up to L-1 samples), so every vector has n + L - 1 entries and
/// target + interference + artifact equals the padded estimate.
struct Decomposition {
  std::vector<double> target;
  std::vector<double> interference;
  std::vector<double> artifact;
};

/// target = least-squares projection of the estimate onto the span of the
/// delays 0..L-1 of references[source]; target + interference = projection
/// onto the delays of all references. Gram matrices are assembled from
/// FFT correlations (block Toeplitz) and solved with a small ridge.
Decomposition Decompose(std::span<const double> estimate,
                        std::span<const std::vector<double>> references, std::size_t source,
                        int filter_length = kDefaultFilterLength);

struct SourceScores {
  double sdr = 0;
  double sir = 0;
  double sar = 0;
};

// dB ratios clamped to +-100. A zero numerator gives -100 (checked first), a
// zero denominator +100.
SourceScores Scores(const Decomposition& d);
double RatioDb(double numerator_energy, double denominator_energy);

// Source 0 is the vocal, 1 the background.
inline constexpr std::array<const char*, 2> kSourceNames{"vocal", "music"};

struct ClipScores {
  std::string clip_id;
  double duration_seconds = 0;
  std::array<SourceScores, 2> sources;
};

/// Scores index-aligned estimates against their references; there is no
/// permutation search.
ClipScores EvaluateClip(const std::string& clip_id, double duration_seconds,
                        std::span<const std::vector<double>> estimates,
                        std::span<const std::vector<double>> references,
                        int filter_length = kDefaultFilterLength);

enum class Aggregate { kWeightedMean, kMedian };

// Per-source aggregate over clips; the weighted mean uses clip durations.
std::array<SourceScores, 2> AggregateScores(std::span<const ClipScores> clips,
                                            Aggregate how);

// clip_id,source,sdr,sir,sar,duration_s
void WriteScoresCsv(const std::filesystem::path& path, std::span<const ClipScores> clips);
// JSON with the aggregate per source, the method and the clip count.
void WriteScoresSummary(const std::filesystem::path& path, std::span<const ClipScores> clips,
                        Aggregate how);

}  // namespace voicesep

#endif  // VOICESEP_BSS_EVAL_HPP_
