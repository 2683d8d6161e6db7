#pragma once

#include <string>

#include "evolab/data/dataset.hpp"

namespace evolab {

// IDX image/label pair (big-endian magics 0x00000803 / 0x00000801).
// Pixels are scaled to [0,1]; clean labels start equal to the file labels.
NoisyDataset load_idx(const std::string& images_path, const std::string& labels_path);

// Writes a categorical dataset back out as an IDX pair (pixels quantized to
// u8). Inputs must be single-channel.
void write_idx(const std::string& images_path, const std::string& labels_path,
               const NoisyDataset& ds);

}  // namespace evolab
