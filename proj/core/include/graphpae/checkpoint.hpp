#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "graphpae/tensor.hpp"

namespace graphpae {

/// Named tensor table stored in the "PAEW" checkpoint format:
///
///   magic "PAEW" | u16 version | u64 entry count
///   per entry: u32 name length | name bytes | u64 rank | u64 dims[rank] | f64 payload
///
/// All integers and floats little-endian.
using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

inline constexpr std::uint16_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path, const NamedTensors& entries);
NamedTensors read_checkpoint(const std::filesystem::path& path);

}  // namespace graphpae
