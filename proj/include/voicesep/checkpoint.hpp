// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_CHECKPOINT_HPP_
#define VOICESEP_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "voicesep/dense_net.hpp"

namespace voicesep {

/// Binary network checkpoint, all integers little-endian:
///
///   "SVSG" | u32 version (1) | u32 layer_count
///   layer_count x (u32 in | u32 out | u8 activation)
///   every layer's weights, row-major f32
///   every layer's biases, f32
///   u64 seed | u32 CRC-32 of all preceding bytes
std::string EncodeCheckpoint(const DenseNet<float>& net);
DenseNet<float> DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::filesystem::path& path, const DenseNet<float>& net);
DenseNet<float> LoadCheckpoint(const std::filesystem::path& path);

// CRC-32 (zlib polynomial).
std::uint32_t Crc32(std::string_view bytes);
std::uint32_t FileCrc32(const std::filesystem::path& path);

std::string ReadFileBytes(const std::filesystem::path& path);

}  // namespace voicesep

#endif  // VOICESEP_CHECKPOINT_HPP_
