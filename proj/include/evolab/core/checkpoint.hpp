#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evolab/core/tensor.hpp"

namespace evolab {

// Deep-copy snapshot of a parameter set. Restoring yields bit-identical
// parameters; optimizer state is deliberately not part of a checkpoint.
struct Checkpoint {
    std::uint32_t layer_count = 0;
    std::vector<Tensor> tensors;
    std::uint64_t hash = 0;  // FNV-1a over (rank, dims, payload) of every tensor
};

Checkpoint make_checkpoint(std::span<const Tensor* const> params, std::uint32_t layer_count);
void apply_checkpoint(std::span<Tensor* const> params, const Checkpoint& ckpt);

// File format: magic "SECK", u32 version, u32 layer count, u32 tensor count,
// per tensor (u8 rank, u32 dims..., f64 LE payload), trailing u64 content hash.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace evolab
