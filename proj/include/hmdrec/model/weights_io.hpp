#pragma once

// Weight file layout (all integers and floats little-endian):
//
//   8 bytes   magic "HMDRECW\0"
//   u32       format version (1)
//   u32       window_len
//   u32       stream count; per stream: u32 group count, then one u8 group id each
//   u32       conv layer count; u32 channels each
//   u32 x 4   kernel, stride, padding, pool
//   u32       hidden dense count; u32 size each
//   u32       class count; i32 class index each
//   f64       dropout
//   u64       parameter count
//   f64[]     parameter arrays in NetworkWeights::parameter_arrays() order

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hmdrec/model/network.hpp"

namespace hmdrec::model {

inline constexpr std::string_view kWeightsMagic{"HMDRECW\0", 8};
inline constexpr std::uint32_t kWeightsVersion = 1;

std::vector<std::uint8_t> encode_weights(const NetworkWeights& weights);

/// Throws MagicMismatchError, VersionMismatchError, TruncatedFileError or
/// TopologyMismatchError; never returns a partially filled model.
NetworkWeights decode_weights(std::span<const std::uint8_t> bytes,
                              const std::optional<NetworkConfig>& expected = std::nullopt);

void save_weights(const NetworkWeights& weights, const std::filesystem::path& path);
NetworkWeights load_weights(const std::filesystem::path& path,
                            const std::optional<NetworkConfig>& expected = std::nullopt);

}  // namespace hmdrec::model
