#include "evolab/noise/noise.hpp"

#include <algorithm>
#include <numeric>

#include "evolab/core/rng.hpp"
#include "evolab/loop/metrics.hpp"

namespace evolab {

void NoiseSpec::validate() const {
    if (eta < 0.0 || eta >= 1.0) throw ArgumentError("noise: eta must be in [0,1)");
    if (kind == NoiseKind::symmetric && classes < 2) {
        throw ArgumentError("noise: symmetric noise needs >= 2 classes");
    }
}

std::pair<NoisyDataset, FlipMask> inject_symmetric(const NoisyDataset& dataset,
                                                   const NoiseSpec& spec) {
    spec.validate();
    if (dataset.space != LabelSpace::categorical) {
        throw ArgumentError("inject_symmetric: categorical label space required");
    }
    if (spec.classes != dataset.classes) {
        throw ArgumentError("inject_symmetric: spec classes do not match dataset");
    }

    NoisyDataset out = dataset;
    FlipMask mask(dataset.size(), 0);
    Rng rng(derive_seed(spec.seed, 0xf11b));
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.uniform() >= spec.eta) continue;
        // uniform over the C-1 classes other than the current clean value
        const int clean = out.labels_cls[i];
        int pick = static_cast<int>(rng.index(dataset.classes - 1));
        if (pick >= clean) ++pick;
        out.labels_cls[i] = pick;
        mask[i] = 1;
    }
    return {std::move(out), std::move(mask)};
}

std::pair<NoisyDataset, FlipMask> inject_blanking(const NoisyDataset& dataset,
                                                  const NoiseSpec& spec) {
    spec.validate();
    if (dataset.space != LabelSpace::heatmap) {
        throw ArgumentError("inject_blanking: heat-map label space required");
    }

    NoisyDataset out = dataset;
    FlipMask mask(dataset.size(), 0);

    std::vector<std::size_t> object_bearing;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Tensor& clean = dataset.clean_map[i];
        double mx = 0.0;
        for (double v : clean.data) mx = std::max(mx, v);
        if (mx > 0.0) object_bearing.push_back(i);
    }

    // exact-fraction selection keeps experiment noise levels exact
    Rng rng(derive_seed(spec.seed, 0xb1a2));
    rng.shuffle(object_bearing);
    const std::size_t blank_count =
        static_cast<std::size_t>(spec.eta * static_cast<double>(object_bearing.size()));
    for (std::size_t j = 0; j < blank_count; ++j) {
        const std::size_t i = object_bearing[j];
        out.labels_map[i] = Tensor(dataset.labels_map[i].shape);
        mask[i] = 1;
    }
    return {std::move(out), std::move(mask)};
}

std::pair<NoisyDataset, FlipMask> inject_noise(const NoisyDataset& dataset, const NoiseSpec& spec) {
    return spec.kind == NoiseKind::symmetric ? inject_symmetric(dataset, spec)
                                             : inject_blanking(dataset, spec);
}

double noise_level(const NoisyDataset& dataset) {
    const std::size_t n = dataset.size();
    if (n == 0) return 0.0;
    std::size_t noisy = 0;
    if (dataset.space == LabelSpace::categorical) {
        for (std::size_t i = 0; i < n; ++i) {
            if (dataset.labels_cls[i] != dataset.clean_cls[i]) ++noisy;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (cosine_similarity(dataset.labels_map[i], dataset.clean_map[i]) < 0.5) ++noisy;
        }
    }
    return static_cast<double>(noisy) / static_cast<double>(n);
}

}  // namespace evolab
