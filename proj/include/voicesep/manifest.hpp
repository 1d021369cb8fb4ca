// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_MANIFEST_HPP_
#define VOICESEP_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "voicesep/config.hpp"

namespace voicesep {

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kGeneratorFile = "generator.ckpt";
inline constexpr const char* kDiscriminatorFile = "discriminator.ckpt";

/// Everything needed to reproduce a run: the config (with all seeds), the
/// feature scale, the clip split, training progress and a CRC-32 per file.
struct RunManifest {
  RunConfig config;
  double normalization_scale = 1.0;
  bool pretrained = false;
  int adversarial_epochs_completed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  // Checkpoint file name in the run dir -> its payload CRC-32.
  std::map<std::string, std::uint32_t> checksums;

  bool operator==(const RunManifest&) const;
};

/// CRC-32 of every byte of a checkpoint file before its CRC field, after
/// checking it against that field (kIntegrity on mismatch). A CRC over the
/// whole file would be the same constant for every intact checkpoint.
std::uint32_t CheckpointPayloadCrc(const std::filesystem::path& path);

// Records CheckpointPayloadCrc(run_dir / file).
void RecordChecksum(RunManifest& manifest, const std::filesystem::path& run_dir,
                    const std::string& file);

void SaveManifest(const std::filesystem::path& run_dir, const RunManifest& manifest);

/// Throws kNotFound without a manifest and kIntegrity when a listed file is
/// missing or its CRC differs.
RunManifest LoadManifest(const std::filesystem::path& run_dir);

}  // namespace voicesep

#endif  // VOICESEP_MANIFEST_HPP_
