#pragma once

#include "kgcwalk/params.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kgcwalk {

// Checkpoint file layout:
//   8-byte magic "KGCWALK1"
//   for each parameter, in the store's stable order:
//     name length (u32 LE), name bytes,
//     shape rank (u32 LE), dims (u32 LE each),
//     element data (f64 LE, row-major)
//   optionally, a u32 0 (an impossible name length, parameter names are
//   non-empty) terminates the parameter stream and is followed by the
//   vocabulary: token count (u32 LE), then per token length (u32 LE) + bytes,
//   in id order. Round-trips are bit-exact.

struct CheckpointRecord {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> data;
};

struct CheckpointData {
    std::vector<CheckpointRecord> records;
    std::vector<std::string> vocab_tokens;

    const CheckpointRecord* find(const std::string& name) const;
};

void save_checkpoint(const ParamStore& store, const std::vector<std::string>& vocab_tokens,
                     const std::filesystem::path& path);

CheckpointData read_checkpoint(const std::filesystem::path& path);

// Copies record values into a store whose parameter names and shapes must
// match exactly; throws a diagnostic naming the first mismatch.
void load_into(ParamStore& store, const CheckpointData& data);

} // namespace kgcwalk
