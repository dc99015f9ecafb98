#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedqnn/qnn.hpp"

namespace fedqnn::fed {

struct ClientUpdate {
    std::uint32_t round = 0;
    std::uint32_t client_id = 0;
    qnn::ParameterVector params;
    std::uint32_t num_samples = 1;
};

struct GlobalModel {
    qnn::ParameterVector params;
    std::uint32_t round = 0;
};

// Per-component mean of the client parameter vectors. Unweighted by default;
// `weighted` switches to num_samples weighting.
GlobalModel fedavg_aggregate(std::span<const ClientUpdate> updates,
                             bool weighted = false);

// Wire payload layout (little-endian integers and doubles):
//   u32 round | u32 client_id | u32 P | P x f64 params | u32 num_samples
std::vector<std::uint8_t> serialize_update(const ClientUpdate& update);
ClientUpdate deserialize_update(std::span<const std::uint8_t> payload);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

// Frame layout: u32_be length | payload | u32_be CRC32(payload).
constexpr std::size_t kMaxFrameBytes = 1 << 20;

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload);

// Throws TransportError on truncation, length mismatch or CRC failure.
std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> frame);

}  // namespace fedqnn::fed
