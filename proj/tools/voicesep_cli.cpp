// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Command-line front end: synth, train, separate, evaluate, oracle, gradcheck.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <unordered_set>

#include <CLI11.hpp>

#include "voicesep/audio.hpp"
#include "voicesep/bss_eval.hpp"
#include "voicesep/error.hpp"
#include "voicesep/objectives.hpp"
#include "voicesep/runner.hpp"
#include "voicesep/synth.hpp"

namespace {

using namespace voicesep;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter:
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kTraining:
    case ErrorKind::kNumerical:
    case ErrorKind::kInternal:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

// Scales both outputs down together only if either would clip.
void WritePair(const SeparationResult& r, const std::string& vocal_path,
               const std::string& music_path) {
  double peak = 0.0;
  for (const auto* clip : {&r.vocal, &r.music}) {
    for (double x : clip->samples()) peak = std::max(peak, std::abs(x));
  }
  SeparationResult out = r;
  if (peak > 32767.0 / 32768.0) {
    const double gain = (32767.0 / 32768.0) / peak;
    std::clog << "output would clip; applying gain " << gain << '\n';
    for (auto* clip : {&out.vocal, &out.music}) {
      for (double& x : clip->channels[0]) x *= gain;
    }
  }
  WriteWav(vocal_path, out.vocal);
  WriteWav(music_path, out.music);
}

Aggregate ParseAggregate(const std::string& s) {
  if (s == "weighted-mean") return Aggregate::kWeightedMean;
  if (s == "median") return Aggregate::kMedian;
  Fail(ErrorKind::kParameter, "unknown aggregate '" + s + "'");
}

void PrintAggregate(const std::vector<ClipScores>& scores, Aggregate how) {
  const auto agg = AggregateScores(scores, how);
  for (std::size_t s = 0; s < 2; ++s) {
    std::cout << kSourceNames[s] << ": SDR " << agg[s].sdr << " dB, SIR " << agg[s].sir
              << " dB, SAR " << agg[s].sar << " dB\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monaural singing voice separation with mask-output generators"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write the synthetic two-source dataset");
  std::string synth_out;
  SynthOptions synth_options;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--clips", synth_options.clips, "Number of clips");
  synth->add_option("--seed", synth_options.seed, "Generator seed");
  synth->add_option("--duration", synth_options.duration_seconds, "Clip length in seconds");

  // train
  auto* train = app.add_subcommand("train", "Pretrain and adversarially fine-tune");
  std::string train_data, train_config, train_out, train_variant;
  bool pretrain_only = false;
  train->add_option("--data", train_data, "Directory of stereo WAVs")->required();
  train->add_option("--config", train_config, "Run config JSON");
  train->add_option("--out", train_out, "Run directory")->required();
  train->add_option("--variant", train_variant, "Discriminator input: vbm, vm or vb")
      ->check(CLI::IsMember({"vbm", "vm", "vb"}));
  train->add_flag("--pretrain-only", pretrain_only, "Skip the adversarial phase");

  // separate
  auto* separate = app.add_subcommand("separate", "Separate one mixture file");
  std::string sep_model, sep_in, sep_vocal, sep_music;
  separate->add_option("--model", sep_model, "Run directory")->required();
  separate->add_option("--in", sep_in, "Mixture WAV")->required();
  separate->add_option("--out-vocal", sep_vocal, "Vocal output WAV")->required();
  separate->add_option("--out-music", sep_music, "Background output WAV")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "BSS-Eval scores of a trained model");
  std::string eval_model, eval_data, eval_csv, eval_summary;
  std::string eval_aggregate = "weighted-mean";
  bool eval_all = false;
  evaluate->add_option("--model", eval_model, "Run directory")->required();
  evaluate->add_option("--data", eval_data, "Directory of stereo WAVs")->required();
  evaluate->add_option("--csv", eval_csv, "Per-clip scores CSV")->required();
  evaluate->add_option("--aggregate", eval_aggregate, "weighted-mean or median")
      ->check(CLI::IsMember({"weighted-mean", "median"}));
  evaluate->add_option("--summary", eval_summary, "Aggregate JSON");
  evaluate->add_flag("--all", eval_all, "Score every clip, not just the run's test split");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "BSS-Eval scores of oracle masks");
  std::string oracle_data, oracle_mask = "ibm", oracle_csv, oracle_config, oracle_summary;
  std::string oracle_aggregate = "weighted-mean";
  oracle->add_option("--data", oracle_data, "Directory of stereo WAVs")->required();
  oracle->add_option("--mask", oracle_mask, "ibm or soft")
      ->check(CLI::IsMember({"ibm", "soft"}));
  oracle->add_option("--csv", oracle_csv, "Per-clip scores CSV")->required();
  oracle->add_option("--config", oracle_config, "Run config JSON (rates, STFT, filter length)");
  oracle->add_option("--aggregate", oracle_aggregate, "weighted-mean or median")
      ->check(CLI::IsMember({"weighted-mean", "median"}));
  oracle->add_option("--summary", oracle_summary, "Aggregate JSON");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient oracle");
  std::uint64_t gc_seed = 1;
  gradcheck->add_option("--seed", gc_seed, "Seed for the toy instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) {
      const auto paths = WriteSyntheticDataset(synth_out, synth_options);
      std::cout << "wrote " << paths.size() << " clips to " << synth_out << '\n';
    } else if (*train) {
      RunConfig config = train_config.empty() ? RunConfig{} : LoadRunConfig(train_config);
      if (!train_variant.empty()) config.variant = ParseVariant(train_variant);
      const RunManifest m = TrainRun(train_data, config, train_out, pretrain_only);
      std::cout << "trained on " << m.train_ids.size() << " clips, " << m.test_ids.size()
                << " held out; adversarial epochs " << m.adversarial_epochs_completed
                << "; run written to " << train_out << '\n';
    } else if (*separate) {
      const LoadedRun run = LoadRun(sep_model);
      const RunConfig& c = run.manifest.config;
      const AudioClip mixture = Resample(DownmixToMono(ReadWav(sep_in)), c.sample_rate);
      WritePair(Separate(run.generator, mixture, run.manifest.normalization_scale,
                         c.frame_size, c.hop),
                sep_vocal, sep_music);
    } else if (*evaluate) {
      const LoadedRun run = LoadRun(eval_model);
      const RunConfig& c = run.manifest.config;
      std::vector<ClipRecord> clips = Ingest(eval_data, c.channels, c.sample_rate);
      if (!eval_all) {
        const std::unordered_set<std::string> test(run.manifest.test_ids.begin(),
                                                   run.manifest.test_ids.end());
        std::vector<ClipRecord> held;
        for (auto& clip : clips) {
          if (test.contains(clip.id)) held.push_back(std::move(clip));
        }
        if (held.empty()) {
          std::clog << "warning: none of the run's test clips found; scoring all clips\n";
          clips = Ingest(eval_data, c.channels, c.sample_rate);
        } else {
          clips = std::move(held);
        }
      }
      const auto scores = EvaluateModel(run.generator, clips, run.manifest.normalization_scale, c);
      WriteScoresCsv(eval_csv, scores);
      if (!eval_summary.empty()) {
        WriteScoresSummary(eval_summary, scores, ParseAggregate(eval_aggregate));
      }
      PrintAggregate(scores, ParseAggregate(eval_aggregate));
    } else if (*oracle) {
      const RunConfig config =
          oracle_config.empty() ? RunConfig{} : LoadRunConfig(oracle_config);
      const auto clips = Ingest(oracle_data, config.channels, config.sample_rate);
      const auto scores = EvaluateOracle(clips, ParseOracleMask(oracle_mask), config);
      WriteScoresCsv(oracle_csv, scores);
      if (!oracle_summary.empty()) {
        WriteScoresSummary(oracle_summary, scores, ParseAggregate(oracle_aggregate));
      }
      PrintAggregate(scores, ParseAggregate(oracle_aggregate));
    } else if (*gradcheck) {
      bool ok = true;
      for (const auto& check : RunStandardGradChecks(gc_seed)) {
        const bool pass = check.result.max_relative_error < kGradRelativeTolerance &&
                          check.result.max_absolute_error < kGradAbsoluteTolerance;
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << check.name << ": max relative error "
                  << check.result.max_relative_error << " over "
                  << check.result.coordinates_checked << " coordinates (worst "
                  << check.result.worst << "), max absolute error "
                  << check.result.max_absolute_error << " over " << check.result.small_checked
                  << " near-zero coordinates, " << check.result.kinks_skipped
                  << " kink crossings skipped\n";
      }
      return ok ? kExitOk : kExitNumerical;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
