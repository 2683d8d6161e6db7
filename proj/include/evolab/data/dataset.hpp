#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evolab/core/tensor.hpp"

namespace evolab {

enum class LabelSpace { categorical, heatmap };

// Inputs plus three label tracks: the working labels (rewritten by noise
// injection and correction), and the retained clean labels, which exist for
// evaluation only and are never visible to primary training or correction.
struct NoisyDataset {
    LabelSpace space = LabelSpace::categorical;
    std::size_t classes = 0;             // categorical only
    std::size_t map_h = 0, map_w = 0;    // heatmap only

    std::vector<Tensor> inputs;          // per-sample [C,H,W]
    std::vector<int> labels_cls;
    std::vector<int> clean_cls;
    std::vector<Tensor> labels_map;
    std::vector<Tensor> clean_map;
    std::vector<std::uint64_t> sample_ids;
    std::vector<std::uint64_t> object_ids;

    std::size_t size() const { return inputs.size(); }
    void validate() const;
};

struct SplitPair {
    NoisyDataset train;
    NoisyDataset gold;
};

// Categorical datasets split positionally (first N-gold_count / last
// gold_count). Heat-map datasets split by object id so no object leaks
// across subsets: whole objects are moved to gold, scanning from the end,
// until at least gold_count samples have accumulated.
SplitPair split(const NoisyDataset& dataset, std::size_t gold_count, std::uint64_t seed);

// Line-delimited dataset manifest: sample id, object id, label, digest,
// flipped, changed. Heat-map labels live in a sidecar record store; the
// manifest carries their digests.
struct ManifestRow {
    std::uint64_t sample_id = 0;
    std::uint64_t object_id = 0;
    int label = -1;  // categorical only
    std::string digest;
    bool flipped = false;
    bool changed = false;
};

struct Manifest {
    LabelSpace space = LabelSpace::categorical;
    std::vector<ManifestRow> rows;
};

std::string label_digest(const NoisyDataset& ds, std::size_t idx);

Manifest manifest_of(const NoisyDataset& ds, const std::vector<std::uint8_t>* flipped = nullptr,
                     const std::vector<std::uint8_t>* changed = nullptr);

void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

// Overwrites ds.labels_* from a manifest (categorical) or a sidecar map
// store (heatmap), verifying digests. Returns the manifest's flipped mask.
std::vector<std::uint8_t> apply_manifest_labels(NoisyDataset& ds, const Manifest& m,
                                                const std::string& map_store_path = "");

// Sidecar store for heat-map labels: one single-slice record per sample.
void write_label_maps(const std::string& path, const NoisyDataset& ds);

}  // namespace evolab
