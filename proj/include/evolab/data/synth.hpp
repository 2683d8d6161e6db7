#pragma once

#include <cstdint>

#include "evolab/data/dataset.hpp"

namespace evolab {

// Synthetic transient-pair generator: template/science image pairs sharing a
// galaxy field, the science frame optionally carrying one PSF-shaped
// transient. Scenes ("objects") are reused across variants_per_object noise
// realizations so splits can be made leak-free by object id.
struct SynthSpec {
    std::size_t image_size = 32;
    std::size_t galaxy_min = 3;
    std::size_t galaxy_max = 8;
    double galaxy_sigma_min = 1.5;
    double galaxy_sigma_max = 4.0;
    double galaxy_amp_min = 0.3;
    double galaxy_amp_max = 1.0;
    double psf_sigma = 1.2;
    double transient_amp_min = 0.4;
    double transient_amp_max = 1.0;
    double p_obj = 0.8;          // transient presence probability per scene
    double pixel_noise = 0.02;   // sigma as a fraction of galaxy_amp_max
    std::size_t variants_per_object = 5;

    void validate() const;
};

// Each sample: inputs [2,S,S] (template, science), clean target the
// peak-normalized transient heat map (all-zero when absent).
NoisyDataset synthesize_pairs(const SynthSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace evolab
