#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evolab/data/dataset.hpp"

namespace evolab {

enum class NoiseKind { symmetric, blanking };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::symmetric;
    double eta = 0.0;          // noise level in [0,1)
    std::size_t classes = 10;  // categorical only
    std::uint64_t seed = 0;

    void validate() const;
};

// Ground-truth bookkeeping for evaluation; never visible to correction.
using FlipMask = std::vector<std::uint8_t>;

// Symmetric categorical noise: each label survives with probability 1-eta,
// otherwise becomes a uniform draw over the C-1 other classes. Clean labels
// are untouched.
std::pair<NoisyDataset, FlipMask> inject_symmetric(const NoisyDataset& dataset,
                                                   const NoiseSpec& spec);

// Heat-map false negatives: an exact fraction eta of the object-bearing
// targets (shuffled, first floor(eta*K)) is replaced by an all-zero map.
// Object-free samples are never noised.
std::pair<NoisyDataset, FlipMask> inject_blanking(const NoisyDataset& dataset,
                                                  const NoiseSpec& spec);

std::pair<NoisyDataset, FlipMask> inject_noise(const NoisyDataset& dataset, const NoiseSpec& spec);

// Categorical: fraction of labels differing from clean. Heat map: fraction
// of samples whose label-vs-clean cosine similarity is below 0.5.
double noise_level(const NoisyDataset& dataset);

}  // namespace evolab
