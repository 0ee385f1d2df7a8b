#pragma once

// Checkpoint layout (all integers little-endian):
//
//   offset 0   8 bytes  magic "ALCKPT1\n"
//   offset 8   8 bytes  u64 header length H
//   offset 16  H bytes  UTF-8 JSON header
//   then                raw float64 blobs, one per entry of header["tensors"],
//                       in that order, each rows*cols values row-major
//
// Header fields: "format" (1), "tag" ("al" or "bp"), "plan", "seed", "epoch",
// "tensors": [{"name", "rows", "cols"}...]. AL tensors are ordered by
// component and then f, g, b, h; names look like "c2.b.1.weights".

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "al/core/network.hpp"

namespace al::core {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedTensor {
    std::string name;
    const Matrix* value;
};

struct CheckpointData {
    nlohmann::json header;
    std::vector<std::pair<std::string, Matrix>> tensors;
};

// `header` gets "format" and "tensors" filled in.
void write_checkpoint(const std::filesystem::path& path, nlohmann::json header,
                      const std::vector<NamedTensor>& tensors);
CheckpointData read_checkpoint(const std::filesystem::path& path);

void save_checkpoint(const std::filesystem::path& path, const ALNetwork& net, std::uint64_t seed,
                     std::size_t epoch);
ALNetwork load_al_checkpoint(const std::filesystem::path& path, nlohmann::json* header = nullptr);

// Appends "<prefix>.<layer>.weights" / ".bias" entries for a block.
void append_block(std::vector<NamedTensor>& out, const std::string& prefix, const nn::MLPBlock& block);
// Copies tensors (checked by name and shape) into a block, advancing `cursor`.
void restore_block(const CheckpointData& data, std::size_t& cursor, const std::string& prefix,
                   nn::MLPBlock& block);

}  // namespace al::core
