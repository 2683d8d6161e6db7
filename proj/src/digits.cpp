#include "evolab/data/digits.hpp"

#include <array>
#include <cmath>

#include "evolab/core/rng.hpp"

namespace evolab {

namespace {

constexpr int kGlyphH = 7;
constexpr int kGlyphW = 5;

// clang-format off
constexpr std::array<const char*, 10> kGlyphs = {
    "01110"
    "10001"
    "10011"
    "10101"
    "11001"
    "10001"
    "01110",  // 0

    "00100"
    "01100"
    "00100"
    "00100"
    "00100"
    "00100"
    "01110",  // 1

    "01110"
    "10001"
    "00001"
    "00110"
    "01000"
    "10000"
    "11111",  // 2

    "11110"
    "00001"
    "00001"
    "01110"
    "00001"
    "00001"
    "11110",  // 3

    "00010"
    "00110"
    "01010"
    "10010"
    "11111"
    "00010"
    "00010",  // 4

    "11111"
    "10000"
    "11110"
    "00001"
    "00001"
    "10001"
    "01110",  // 5

    "00110"
    "01000"
    "10000"
    "11110"
    "10001"
    "10001"
    "01110",  // 6

    "11111"
    "00001"
    "00010"
    "00100"
    "01000"
    "01000"
    "01000",  // 7

    "01110"
    "10001"
    "10001"
    "01110"
    "10001"
    "10001"
    "01110",  // 8

    "01110"
    "10001"
    "10001"
    "01111"
    "00001"
    "00010"
    "01100",  // 9
};
// clang-format on

double glyph_at(int digit, double gy, double gx) {
    // bilinear sample of the glyph bitmap, zero outside
    const int y0 = static_cast<int>(std::floor(gy));
    const int x0 = static_cast<int>(std::floor(gx));
    const double fy = gy - y0, fx = gx - x0;
    auto texel = [&](int y, int x) -> double {
        if (y < 0 || y >= kGlyphH || x < 0 || x >= kGlyphW) return 0.0;
        return kGlyphs[digit][y * kGlyphW + x] == '1' ? 1.0 : 0.0;
    };
    return texel(y0, x0) * (1 - fy) * (1 - fx) + texel(y0, x0 + 1) * (1 - fy) * fx +
           texel(y0 + 1, x0) * fy * (1 - fx) + texel(y0 + 1, x0 + 1) * fy * fx;
}

}  // namespace

NoisyDataset synth_digits(std::size_t n, std::uint64_t seed, std::size_t classes) {
    if (n == 0) throw ArgumentError("synth_digits: n must be positive");
    if (classes < 2 || classes > 10) throw ArgumentError("synth_digits: classes must be in [2,10]");

    constexpr std::size_t kSize = 28;
    NoisyDataset ds;
    ds.space = LabelSpace::categorical;
    ds.classes = classes;
    ds.inputs.reserve(n);
    ds.labels_cls.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::child(seed, i);
        const int digit = static_cast<int>(rng.index(classes));

        const double angle = rng.uniform(-0.25, 0.25);
        const double scale = rng.uniform(0.85, 1.15);
        const double shift_y = rng.uniform(-2.5, 2.5);
        const double shift_x = rng.uniform(-2.5, 2.5);
        const double intensity = rng.uniform(0.75, 1.0);
        const double noise_sigma = 0.05;

        // output pixel -> glyph coords (inverse affine around the centers)
        const double cos_a = std::cos(angle), sin_a = std::sin(angle);
        const double cell_h = scale * 20.0 / kGlyphH;  // glyph box ~20px tall
        const double cell_w = scale * 14.0 / kGlyphW;
        const double cy = kSize / 2.0 + shift_y, cx = kSize / 2.0 + shift_x;

        Tensor img({1, kSize, kSize});
        for (std::size_t y = 0; y < kSize; ++y) {
            for (std::size_t x = 0; x < kSize; ++x) {
                const double dy = (static_cast<double>(y) + 0.5) - cy;
                const double dx = (static_cast<double>(x) + 0.5) - cx;
                const double ry = cos_a * dy - sin_a * dx;
                const double rx = sin_a * dy + cos_a * dx;
                const double gy = ry / cell_h + kGlyphH / 2.0 - 0.5;
                const double gx = rx / cell_w + kGlyphW / 2.0 - 0.5;
                double v = intensity * glyph_at(digit, gy, gx);
                v += noise_sigma * rng.normal();
                img.data[y * kSize + x] = std::min(1.0, std::max(0.0, v));
            }
        }
        ds.inputs.push_back(std::move(img));
        ds.labels_cls.push_back(digit);
    }

    ds.clean_cls = ds.labels_cls;
    ds.sample_ids.resize(n);
    ds.object_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ds.sample_ids[i] = i;
        ds.object_ids[i] = i;
    }
    ds.validate();
    return ds;
}

}  // namespace evolab
