#include "evolab/data/cube.hpp"

#include <algorithm>

namespace evolab {

void EvolutionCube::validate() const {
    if (phase_boundary > slices.size()) {
        throw DimensionError("cube: phase boundary " + std::to_string(phase_boundary) +
                             " beyond step count " + std::to_string(slices.size()));
    }
    for (const Tensor& s : slices) {
        if (s.shape != slice_shape) {
            throw DimensionError("cube: slice shape drift, expected " + shape_str(slice_shape) +
                                 ", found " + shape_str(s.shape));
        }
    }
}

namespace {

EvolutionCube take_indices(const EvolutionCube& cube, const std::vector<std::size_t>& kept) {
    EvolutionCube out;
    out.sample_id = cube.sample_id;
    out.failed = cube.failed;
    out.slice_shape = cube.slice_shape;
    out.checkpoint_hash = cube.checkpoint_hash;
    out.support_cfg = cube.support_cfg;
    out.selfish_cfg = cube.selfish_cfg;
    out.slices.reserve(kept.size());
    std::uint32_t boundary = 0;
    for (std::size_t idx : kept) {
        if (idx < cube.phase_boundary) ++boundary;
        out.slices.push_back(cube.slices[idx]);
    }
    out.phase_boundary = boundary;
    return out;
}

}  // namespace

EvolutionCube downsample_cube_stride(const EvolutionCube& cube, std::size_t stride) {
    if (stride == 0) throw ArgumentError("downsample_cube: stride must be positive");
    const std::size_t t = cube.steps();
    if (t == 0) throw ArgumentError("downsample_cube: empty cube");
    std::vector<std::size_t> kept;
    for (std::size_t i = t; i-- > 0;) {
        if ((t - 1 - i) % stride == 0) kept.push_back(i);
    }
    std::reverse(kept.begin(), kept.end());
    return take_indices(cube, kept);
}

EvolutionCube downsample_cube(const EvolutionCube& cube, std::size_t target_depth) {
    const std::size_t t = cube.steps();
    if (target_depth < 2) throw ArgumentError("downsample_cube: target depth must be >= 2");
    if (target_depth > t) {
        throw ArgumentError("downsample_cube: target depth " + std::to_string(target_depth) +
                            " exceeds cube depth " + std::to_string(t));
    }
    const std::size_t stride = t / target_depth;
    std::vector<std::size_t> kept(target_depth);
    for (std::size_t i = 0; i < target_depth; ++i) {
        kept[target_depth - 1 - i] = t - 1 - stride * i;
    }
    return take_indices(cube, kept);
}

}  // namespace evolab
