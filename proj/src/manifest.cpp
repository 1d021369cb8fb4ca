// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/manifest.hpp"

#include <fstream>
#include <string_view>

#include <json.hpp>

#include "voicesep/checkpoint.hpp"
#include "voicesep/error.hpp"

namespace voicesep {

bool RunManifest::operator==(const RunManifest& other) const {
  nlohmann::json a = config;
  nlohmann::json b = other.config;
  return a == b && normalization_scale == other.normalization_scale &&
         pretrained == other.pretrained &&
         adversarial_epochs_completed == other.adversarial_epochs_completed &&
         train_ids == other.train_ids && test_ids == other.test_ids &&
         checksums == other.checksums;
}

std::uint32_t CheckpointPayloadCrc(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  if (bytes.size() < 4) Fail(ErrorKind::kIntegrity, path.string() + " is too short");
  const std::string_view payload(bytes.data(), bytes.size() - 4);
  std::uint32_t stored = 0;
  for (int i = 3; i >= 0; --i) {
    stored = (stored << 8) | static_cast<unsigned char>(bytes[payload.size() + i]);
  }
  const std::uint32_t crc = Crc32(payload);
  if (crc != stored) Fail(ErrorKind::kIntegrity, path.string() + " fails its own CRC");
  return crc;
}

void RecordChecksum(RunManifest& manifest, const std::filesystem::path& run_dir,
                    const std::string& file) {
  manifest.checksums[file] = CheckpointPayloadCrc(run_dir / file);
}

void SaveManifest(const std::filesystem::path& run_dir, const RunManifest& m) {
  nlohmann::json j;
  j["format"] = "voicesep-run";
  j["version"] = 1;
  j["config"] = m.config;
  j["normalization_scale"] = m.normalization_scale;
  j["pretrained"] = m.pretrained;
  j["adversarial_epochs_completed"] = m.adversarial_epochs_completed;
  j["split"] = {{"train", m.train_ids}, {"test", m.test_ids}};
  j["checksums"] = nlohmann::json::object();
  for (const auto& [file, crc] : m.checksums) j["checksums"][file] = crc;

  std::filesystem::create_directories(run_dir);
  std::ofstream out(run_dir / kManifestFile, std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write manifest in " + run_dir.string());
  // max_digits10 keeps the scale bit-exact through the text round trip.
  out << j.dump(2) << '\n';
  if (!out) Fail(ErrorKind::kIo, "short write to manifest in " + run_dir.string());
}

RunManifest LoadManifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / kManifestFile;
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kNotFound, "no manifest at " + path.string());
  RunManifest m;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "voicesep-run" || j.value("version", 0) != 1) {
      Fail(ErrorKind::kFormat, path.string() + " is not a version 1 run manifest");
    }
    j.at("config").get_to(m.config);
    m.normalization_scale = j.at("normalization_scale").get<double>();
    m.pretrained = j.at("pretrained").get<bool>();
    m.adversarial_epochs_completed = j.at("adversarial_epochs_completed").get<int>();
    m.train_ids = j.at("split").at("train").get<std::vector<std::string>>();
    m.test_ids = j.at("split").at("test").get<std::vector<std::string>>();
    for (const auto& [file, crc] : j.at("checksums").items()) {
      m.checksums[file] = crc.get<std::uint32_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  m.config.Validate();

  for (const auto& [file, crc] : m.checksums) {
    const auto file_path = run_dir / file;
    if (!std::filesystem::exists(file_path)) {
      Fail(ErrorKind::kIntegrity, "manifest lists missing file " + file_path.string());
    }
    if (CheckpointPayloadCrc(file_path) != crc) {
      Fail(ErrorKind::kIntegrity, file_path.string() + " does not match its recorded checksum");
    }
  }
  return m;
}

}  // namespace voicesep
