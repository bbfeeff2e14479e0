#pragma once

#include <string>
#include <utility>
#include <vector>

#include "svol/tensor.hpp"

namespace svol {

// Checkpoint container: an ordered list of named f64 arrays.
//
// Binary layout (all integers little-endian):
//   magic "SVAN" | u32 version=1 | u32 array count
//   per array: u16 name length | UTF-8 name | u8 rank | rank x u64 dims |
//              row-major f64 payload
using NamedArrays = std::vector<std::pair<std::string, Tensor>>;

void save_checkpoint(const std::string& path, const NamedArrays& arrays);
NamedArrays load_checkpoint(const std::string& path);

// In-memory encoding, exposed for byte-level tests.
std::vector<unsigned char> encode_checkpoint(const NamedArrays& arrays);
NamedArrays decode_checkpoint(const std::vector<unsigned char>& bytes);

}  // namespace svol
