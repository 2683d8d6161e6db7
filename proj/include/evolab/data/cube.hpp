#pragma once

#include <cstdint>
#include <vector>

#include "evolab/core/adam.hpp"
#include "evolab/core/tensor.hpp"

namespace evolab {

// Ordered model outputs recorded after each overfitting step, restarted from
// a fixed checkpoint. slices[t] is the inference on the sample after update
// t+1; the support phase (if any) occupies slices [0, phase_boundary).
struct EvolutionCube {
    std::uint64_t sample_id = 0;
    std::uint32_t phase_boundary = 0;
    bool failed = false;
    Shape slice_shape;
    std::vector<Tensor> slices;
    std::uint64_t checkpoint_hash = 0;
    SolverConfig support_cfg;
    SolverConfig selfish_cfg;

    std::size_t steps() const { return slices.size(); }
    void validate() const;
};

// Uniform stride subsampling along t that always retains the final slice:
// kept indices are T-1, T-1-stride, ... (reversed). phase_boundary is
// remapped to the count of kept slices below the original boundary.
EvolutionCube downsample_cube_stride(const EvolutionCube& cube, std::size_t stride);

// stride = floor(T / target_depth), then clipped to the last target_depth
// kept slices so the output depth is exact.
EvolutionCube downsample_cube(const EvolutionCube& cube, std::size_t target_depth);

}  // namespace evolab
