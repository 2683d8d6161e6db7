#pragma once

#include <cstdint>

#include "evolab/data/dataset.hpp"

namespace evolab {

// Deterministic synthetic digit images: glyph bitmaps rendered at 28x28
// under random rotation, scale, shift, intensity and pixel noise. A
// self-contained stand-in for handwritten-digit corpora, reconstructible
// from (n, seed) alone.
NoisyDataset synth_digits(std::size_t n, std::uint64_t seed, std::size_t classes = 10);

}  // namespace evolab
