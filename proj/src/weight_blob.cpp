#include "ehdrl/weight_blob.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>

namespace ehdrl::nn {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'E', 'H', 'Q', 'N'};

class Writer {
 public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  WeightBlob take() { return std::move(out_); }
  const WeightBlob& data() const { return out_; }

 private:
  WeightBlob out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw BlobError(BlobErrorCode::kTruncated, "weight blob truncated");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> data) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), data.data(), static_cast<uInt>(data.size())));
}

}  // namespace

WeightBlob serialize(const QNetwork& net) {
  Writer w;
  w.bytes(kMagic);
  w.u16(kBlobVersion);
  w.u16(static_cast<std::uint16_t>(net.layer_dims().size()));
  for (int d : net.layer_dims()) w.u16(static_cast<std::uint16_t>(d));
  w.u32(static_cast<std::uint32_t>(net.parameters().size()));
  for (double p : net.parameters()) w.f32(p);
  for (double p : net.running_mean()) w.f32(p);
  for (double p : net.running_var()) w.f32(p);
  w.u32(crc_of(w.data()));
  return w.take();
}

QNetwork deserialize(std::span<const std::uint8_t> blob, NetworkOptions options) {
  if (blob.size() < kMagic.size() + 2 + 4) {
    throw BlobError(BlobErrorCode::kTruncated, "weight blob shorter than its header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), blob.begin())) {
    throw BlobError(BlobErrorCode::kBadMagic, "weight blob has wrong magic");
  }
  Reader header(blob.subspan(kMagic.size()));
  const std::uint16_t version = header.u16();
  if (version != kBlobVersion) {
    throw BlobError(BlobErrorCode::kBadVersion,
                    "unsupported weight blob version " + std::to_string(version));
  }
  {
    // declared length
    const std::uint16_t n = header.u16();
    std::uint16_t first = 0;
    for (std::uint16_t i = 0; i < n; ++i) {
      const std::uint16_t d = header.u16();
      if (i == 0) first = d;
    }
    const std::uint64_t count = header.u32();
    if (header.remaining() < 4 * (count + 2 * std::uint64_t{first}) + 4) {
      throw BlobError(BlobErrorCode::kTruncated, "weight blob truncated");
    }
  }
  const auto body = blob.first(blob.size() - 4);
  Reader trailer(blob.last(4));
  if (crc_of(body) != trailer.u32()) {
    throw BlobError(BlobErrorCode::kBadChecksum, "weight blob checksum mismatch");
  }

  Reader r(body.subspan(kMagic.size() + 2));
  const std::uint16_t ndims = r.u16();
  std::vector<int> dims(ndims);
  for (auto& d : dims) d = r.u16();
  options.layer_dims = dims;
  QNetwork net = [&] {
    try {
      return QNetwork(options);
    } catch (const std::exception& e) {
      throw BlobError(BlobErrorCode::kBadShape, std::string("weight blob shape: ") + e.what());
    }
  }();

  const std::uint32_t count = r.u32();
  const auto width = static_cast<std::size_t>(net.input_width());
  if (count != static_cast<std::uint32_t>(net.layout().size) ||
      r.remaining() != 4 * (count + 2 * width)) {
    throw BlobError(BlobErrorCode::kBadShape, "weight blob parameter count does not match layer widths");
  }
  Eigen::VectorXd params(count);
  for (auto& p : params) p = r.f32();
  Eigen::VectorXd mean(net.input_width());
  Eigen::VectorXd var(net.input_width());
  for (auto& p : mean) p = r.f32();
  for (auto& p : var) p = r.f32();
  if (!params.allFinite() || !mean.allFinite() || !var.allFinite() || (var.array() < 0.0).any()) {
    throw BlobError(BlobErrorCode::kBadPayload, "weight blob carries non-finite or invalid values");
  }
  net.set_parameters(params);
  net.set_running_stats(mean, var);
  return net;
}

}  // namespace ehdrl::nn
