#include "evolab/data/synth.hpp"

#include <cmath>

#include "evolab/core/rng.hpp"

namespace evolab {

void SynthSpec::validate() const {
    if (image_size < 8) throw ArgumentError("synth: image size must be >= 8");
    if (galaxy_min > galaxy_max) throw ArgumentError("synth: galaxy count range inverted");
    if (!(galaxy_sigma_min > 0.0) || galaxy_sigma_max < galaxy_sigma_min) {
        throw ArgumentError("synth: galaxy sigma range invalid");
    }
    if (!(psf_sigma > 0.0)) throw ArgumentError("synth: psf sigma must be positive");
    if (p_obj < 0.0 || p_obj > 1.0) throw ArgumentError("synth: p_obj must be in [0,1]");
    if (pixel_noise < 0.0) throw ArgumentError("synth: pixel noise must be >= 0");
    if (variants_per_object == 0) throw ArgumentError("synth: variants_per_object must be >= 1");
}

namespace {

struct Galaxy {
    double cy, cx, sy, sx, rot, amp;
};

struct Scene {
    std::vector<Galaxy> galaxies;
    bool has_transient = false;
    double ty = 0.0, tx = 0.0, tamp = 0.0;
};

Scene make_scene(const SynthSpec& spec, std::uint64_t seed, std::uint64_t object_id) {
    Rng rng = Rng::child(seed, object_id * 2 + 1);
    const double s = static_cast<double>(spec.image_size);
    Scene scene;
    const std::size_t count =
        spec.galaxy_min + rng.index(spec.galaxy_max - spec.galaxy_min + 1);
    scene.galaxies.reserve(count);
    for (std::size_t g = 0; g < count; ++g) {
        Galaxy gal;
        gal.cy = rng.uniform(1.0, s - 1.0);
        gal.cx = rng.uniform(1.0, s - 1.0);
        gal.sy = rng.uniform(spec.galaxy_sigma_min, spec.galaxy_sigma_max);
        gal.sx = rng.uniform(spec.galaxy_sigma_min, spec.galaxy_sigma_max);
        gal.rot = rng.uniform(0.0, 3.14159265358979323846);
        gal.amp = rng.uniform(spec.galaxy_amp_min, spec.galaxy_amp_max);
        scene.galaxies.push_back(gal);
    }
    scene.has_transient = rng.uniform() < spec.p_obj;
    if (scene.has_transient) {
        const double margin = 3.0 * spec.psf_sigma;
        scene.ty = rng.uniform(margin, s - margin);
        scene.tx = rng.uniform(margin, s - margin);
        scene.tamp = rng.uniform(spec.transient_amp_min, spec.transient_amp_max);
    }
    return scene;
}

Tensor render_galaxies(const Scene& scene, std::size_t size) {
    Tensor img({1, size, size});
    for (const Galaxy& g : scene.galaxies) {
        const double cos_r = std::cos(g.rot), sin_r = std::sin(g.rot);
        for (std::size_t y = 0; y < size; ++y) {
            for (std::size_t x = 0; x < size; ++x) {
                const double dy = static_cast<double>(y) - g.cy;
                const double dx = static_cast<double>(x) - g.cx;
                const double ry = cos_r * dy - sin_r * dx;
                const double rx = sin_r * dy + cos_r * dx;
                const double e = 0.5 * (ry * ry / (g.sy * g.sy) + rx * rx / (g.sx * g.sx));
                if (e < 12.0) img.data[y * size + x] += g.amp * std::exp(-e);
            }
        }
    }
    return img;
}

Tensor render_psf(double ty, double tx, double amp, double sigma, std::size_t size) {
    Tensor img({1, size, size});
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            const double dy = static_cast<double>(y) - ty;
            const double dx = static_cast<double>(x) - tx;
            const double e = (dy * dy + dx * dx) * inv;
            if (e < 16.0) img.data[y * size + x] = amp * std::exp(-e);
        }
    }
    return img;
}

}  // namespace

NoisyDataset synthesize_pairs(const SynthSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw ArgumentError("synthesize_pairs: n must be positive");

    const std::size_t size = spec.image_size;
    NoisyDataset ds;
    ds.space = LabelSpace::heatmap;
    ds.map_h = size;
    ds.map_w = size;
    ds.inputs.reserve(n);
    ds.labels_map.reserve(n);

    const double noise_sigma = spec.pixel_noise * spec.galaxy_amp_max;

    Scene scene;
    Tensor galaxy_base, transient, target;
    std::uint64_t current_object = UINT64_MAX;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t object_id = i / spec.variants_per_object;
        const std::uint64_t variant = i % spec.variants_per_object;
        if (object_id != current_object) {
            scene = make_scene(spec, seed, object_id);
            galaxy_base = render_galaxies(scene, size);
            if (scene.has_transient) {
                transient = render_psf(scene.ty, scene.tx, scene.tamp, spec.psf_sigma, size);
                // clean target: peak-normalized localization heat map
                target = render_psf(scene.ty, scene.tx, 1.0, spec.psf_sigma, size);
                double mx = 0.0;
                for (double v : target.data) mx = std::max(mx, v);
                for (double& v : target.data) v /= mx;
            } else {
                transient = Tensor({1, size, size});
                target = Tensor({1, size, size});
            }
            current_object = object_id;
        }

        Rng noise_rng = Rng::child(derive_seed(seed, object_id * 2), variant);
        Tensor pair({2, size, size});
        for (std::size_t p = 0; p < size * size; ++p) {
            pair.data[p] = galaxy_base.data[p] + noise_sigma * noise_rng.normal();
        }
        for (std::size_t p = 0; p < size * size; ++p) {
            pair.data[size * size + p] =
                galaxy_base.data[p] + transient.data[p] + noise_sigma * noise_rng.normal();
        }

        ds.inputs.push_back(std::move(pair));
        ds.labels_map.push_back(target);
        ds.object_ids.push_back(object_id);
    }

    ds.clean_map = ds.labels_map;
    ds.sample_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.sample_ids[i] = i;
    ds.validate();
    return ds;
}

}  // namespace evolab
