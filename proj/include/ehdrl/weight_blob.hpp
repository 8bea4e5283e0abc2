#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehdrl/q_network.hpp"

namespace ehdrl::nn {

// Wire format shared by the sink->device weight transfer and on-disk dumps.
//
//   offset  size  field
//   0       4     magic "EHQN"
//   4       2     format version (u16, currently 1)
//   6       2     number of layer widths L (u16)
//   8       2*L   layer widths (u16 each)
//   ..      4     trainable parameter count P (u32)
//   ..      4*P   trainable parameters (f32) in ParameterLayout order
//   ..      4*W   batch-norm running mean (f32), W = input width
//   ..      4*W   batch-norm running variance (f32)
//   ..      4     CRC-32 of every preceding byte (u32)
//
// All integers and floats are little-endian.
inline constexpr std::uint16_t kBlobVersion = 1;
inline constexpr std::size_t kMaxBlobBytes = 10240;

enum class BlobErrorCode { kTruncated, kBadMagic, kBadVersion, kBadChecksum, kBadShape, kBadPayload };

class BlobError : public std::runtime_error {
 public:
  BlobError(BlobErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  BlobErrorCode code() const { return code_; }

 private:
  BlobErrorCode code_;
};

using WeightBlob = std::vector<std::uint8_t>;

WeightBlob serialize(const QNetwork& net);

// Dropout rate and batch-norm hyperparameters are not part of the blob; they
// are taken from `options` (layer_dims there is ignored).
QNetwork deserialize(std::span<const std::uint8_t> blob, NetworkOptions options = {});

}  // namespace ehdrl::nn
