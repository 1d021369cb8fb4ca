// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void Bytes(std::string_view s) { out_.append(s); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint64_t Uint(int bytes) {
    Need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  float F32() { return std::bit_cast<float>(static_cast<std::uint32_t>(Uint(4))); }
  std::string_view Bytes(std::size_t n) {
    Need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (pos_ + n > in_.size()) Fail(ErrorKind::kFormat, "truncated checkpoint");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint32_t Crc32(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kNotFound, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::uint32_t FileCrc32(const std::filesystem::path& path) {
  return Crc32(ReadFileBytes(path));
}

std::string EncodeCheckpoint(const DenseNet<float>& net) {
  Writer w;
  w.Bytes("SVSG");
  w.U32(kVersion);
  w.U32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) {
    w.U32(static_cast<std::uint32_t>(l.in()));
    w.U32(static_cast<std::uint32_t>(l.out()));
    w.U8(static_cast<std::uint8_t>(l.activation));
  }
  for (const auto& l : net.layers) {
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) w.F32(l.weight.data()[i]);
  }
  for (const auto& l : net.layers) {
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) w.F32(l.bias[i]);
  }
  w.U64(net.seed);
  const std::uint32_t crc = Crc32(w.str());
  w.U32(crc);
  return std::move(w.str());
}

DenseNet<float> DecodeCheckpoint(std::string_view bytes) {
  if (bytes.size() < 4 + 4 + 4 + 8 + 4 || bytes.substr(0, 4) != "SVSG") {
    Fail(ErrorKind::kFormat, "not a network checkpoint");
  }
  const std::size_t body = bytes.size() - 4;
  Reader crc_reader(bytes.substr(body));
  if (crc_reader.Uint(4) != Crc32(bytes.substr(0, body))) {
    Fail(ErrorKind::kIntegrity, "checkpoint CRC mismatch");
  }

  Reader r(bytes.substr(0, body));
  r.Bytes(4);
  if (r.Uint(4) != kVersion) Fail(ErrorKind::kUnsupported, "checkpoint version");
  const std::uint64_t layer_count = r.Uint(4);
  if (layer_count == 0 || layer_count > 1024) {
    Fail(ErrorKind::kFormat, "implausible layer count");
  }
  DenseNet<float> net;
  for (std::uint64_t k = 0; k < layer_count; ++k) {
    const auto in = static_cast<Eigen::Index>(r.Uint(4));
    const auto out = static_cast<Eigen::Index>(r.Uint(4));
    const auto act = static_cast<std::uint8_t>(r.Uint(1));
    if (act > static_cast<std::uint8_t>(Activation::kSigmoid)) {
      Fail(ErrorKind::kFormat, "unknown activation tag");
    }
    if (in <= 0 || out <= 0 || (k > 0 && net.layers.back().out() != in)) {
      Fail(ErrorKind::kFormat, "layer dimensions do not chain");
    }
    DenseLayer<float> layer;
    layer.activation = static_cast<Activation>(act);
    layer.weight.resize(out, in);
    layer.bias.resize(out);
    net.layers.push_back(std::move(layer));
  }
  for (auto& l : net.layers) {
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = r.F32();
  }
  for (auto& l : net.layers) {
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = r.F32();
  }
  net.seed = r.Uint(8);
  if (r.pos() != body) Fail(ErrorKind::kFormat, "trailing bytes in checkpoint");
  return net;
}

void SaveCheckpoint(const std::filesystem::path& path, const DenseNet<float>& net) {
  const std::string bytes = EncodeCheckpoint(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

DenseNet<float> LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(ReadFileBytes(path));
}

}  // namespace voicesep
