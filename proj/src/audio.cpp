// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/audio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t LoadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t LoadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void StoreU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void StoreU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioClip AudioClip::Mono(std::vector<double> samples, int sample_rate) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.channels.push_back(std::move(samples));
  return clip;
}

AudioClip AudioClip::Stereo(std::vector<double> left, std::vector<double> right,
                            int sample_rate) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.channels.push_back(std::move(left));
  clip.channels.push_back(std::move(right));
  return clip;
}

void ValidateClip(const AudioClip& clip) {
  if (clip.sample_rate <= 0) {
    Fail(ErrorKind::kParameter,
         "sample rate must be positive, got " + std::to_string(clip.sample_rate));
  }
  if (clip.channels.empty() || clip.channels.size() > 2) {
    Fail(ErrorKind::kParameter, "clips carry 1 or 2 channels, got " +
                                    std::to_string(clip.channels.size()));
  }
  for (const auto& ch : clip.channels) {
    if (ch.size() != clip.channels.front().size()) {
      Fail(ErrorKind::kShape, "channels differ in length");
    }
    if (!std::all_of(ch.begin(), ch.end(),
                     [](double x) { return std::isfinite(x); })) {
      Fail(ErrorKind::kInput, "clip contains non-finite samples");
    }
  }
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    Fail(ErrorKind::kFormat, path.string() + ": not a RIFF/WAVE file");
  }

  FormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* chunk = data + pos;
    const std::uint32_t chunk_size = LoadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > size) {
        Fail(ErrorKind::kFormat, path.string() + ": truncated fmt chunk");
      }
      fmt.format = LoadU16(data + body);
      fmt.channels = LoadU16(data + body + 2);
      fmt.sample_rate = LoadU32(data + body + 4);
      fmt.bits = LoadU16(data + body + 14);
      if (fmt.format == kFormatExtensible) {
        if (chunk_size < 40 || body + 26 > size) {
          Fail(ErrorKind::kFormat, path.string() + ": truncated extensible fmt");
        }
        // The first two bytes of the subformat GUID carry the format tag.
        fmt.format = LoadU16(data + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = data + body;
      // Tolerate writers that leave a streaming placeholder size.
      payload_size = std::min<std::size_t>(chunk_size, size - body);
      if (chunk_size != 0xFFFFFFFFu && chunk_size > size - body) {
        Fail(ErrorKind::kFormat, path.string() + ": truncated data chunk");
      }
      break;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) Fail(ErrorKind::kFormat, path.string() + ": missing fmt chunk");
  if (payload == nullptr) {
    Fail(ErrorKind::kFormat, path.string() + ": missing data chunk");
  }
  if (fmt.channels < 1 || fmt.channels > 2) {
    Fail(ErrorKind::kUnsupported, path.string() + ": " +
                                      std::to_string(fmt.channels) + " channels");
  }
  if (fmt.sample_rate == 0) {
    Fail(ErrorKind::kFormat, path.string() + ": zero sample rate");
  }
  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !float32) {
    Fail(ErrorKind::kUnsupported,
         path.string() + ": format tag " + std::to_string(fmt.format) + " with " +
             std::to_string(fmt.bits) + " bits");
  }

  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = payload_size / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.sample_rate);
  clip.channels.assign(fmt.channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const unsigned char* p = payload + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        clip.channels[c][i] = static_cast<std::int16_t>(LoadU16(p)) / 32768.0;
      } else {
        clip.channels[c][i] = std::bit_cast<float>(LoadU32(p));
      }
    }
  }
  for (const auto& ch : clip.channels) {
    if (!std::all_of(ch.begin(), ch.end(), [](double x) { return std::isfinite(x); })) {
      Fail(ErrorKind::kFormat, path.string() + ": non-finite float samples");
    }
  }
  return clip;
}

void WriteWav(const std::filesystem::path& path, const AudioClip& clip) {
  ValidateClip(clip);
  const auto channels = static_cast<std::uint16_t>(clip.num_channels());
  const std::size_t frames = clip.num_frames();
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(frames * channels * sizeof(std::int16_t));

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  StoreU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  StoreU32(out, 16);
  StoreU16(out, kFormatPcm);
  StoreU16(out, channels);
  StoreU32(out, static_cast<std::uint32_t>(clip.sample_rate));
  StoreU32(out, static_cast<std::uint32_t>(clip.sample_rate) * channels * 2);
  StoreU16(out, static_cast<std::uint16_t>(channels * 2));
  StoreU16(out, 16);
  out += "data";
  StoreU32(out, data_bytes);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double code = std::round(clip.channels[c][i] * 32768.0);
      const auto q = static_cast<std::int16_t>(std::clamp(code, -32768.0, 32767.0));
      StoreU16(out, static_cast<std::uint16_t>(q));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorKind::kIo, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) Fail(ErrorKind::kIo, "short write to " + path.string());
}

AudioClip DownmixToMono(const AudioClip& clip) {
  ValidateClip(clip);
  if (clip.num_channels() == 1) return clip;
  std::vector<double> mono(clip.num_frames());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    mono[i] = 0.5 * (clip.channels[0][i] + clip.channels[1][i]);
  }
  return AudioClip::Mono(std::move(mono), clip.sample_rate);
}

}  // namespace voicesep
