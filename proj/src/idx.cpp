#include "evolab/data/idx.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "evolab/core/binio.hpp"

namespace evolab {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

}  // namespace

NoisyDataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw IoError("cannot open IDX image file: " + images_path);
    std::ifstream labs(labels_path, std::ios::binary);
    if (!labs) throw IoError("cannot open IDX label file: " + labels_path);

    const std::uint32_t img_magic = binio::read_u32_be(imgs, "IDX image magic");
    if (img_magic != kImageMagic) {
        throw FormatError(images_path + ": bad IDX image magic 0x" + std::to_string(img_magic));
    }
    const std::uint32_t n_images = binio::read_u32_be(imgs, "IDX image count");
    const std::uint32_t rows = binio::read_u32_be(imgs, "IDX row count");
    const std::uint32_t cols = binio::read_u32_be(imgs, "IDX column count");

    const std::uint32_t lab_magic = binio::read_u32_be(labs, "IDX label magic");
    if (lab_magic != kLabelMagic) {
        throw FormatError(labels_path + ": bad IDX label magic 0x" + std::to_string(lab_magic));
    }
    const std::uint32_t n_labels = binio::read_u32_be(labs, "IDX label count");
    if (n_images != n_labels) {
        throw FormatError("IDX count mismatch: " + std::to_string(n_images) + " images vs " +
                          std::to_string(n_labels) + " labels");
    }

    NoisyDataset ds;
    ds.space = LabelSpace::categorical;
    ds.classes = 10;
    ds.inputs.reserve(n_images);
    ds.labels_cls.reserve(n_images);

    std::vector<unsigned char> pixel_buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        binio::read_bytes(imgs, pixel_buf.data(), pixel_buf.size(), "IDX image payload");
        Tensor t({1, rows, cols});
        for (std::size_t p = 0; p < pixel_buf.size(); ++p) {
            t.data[p] = static_cast<double>(pixel_buf[p]) / 255.0;
        }
        ds.inputs.push_back(std::move(t));
    }
    for (std::uint32_t i = 0; i < n_labels; ++i) {
        const std::uint8_t v = binio::read_u8(labs, "IDX label payload");
        if (v >= 10) {
            throw FormatError(labels_path + ": label value " + std::to_string(int(v)) +
                              " outside [0,10) at index " + std::to_string(i));
        }
        ds.labels_cls.push_back(static_cast<int>(v));
    }

    ds.clean_cls = ds.labels_cls;
    ds.sample_ids.resize(n_images);
    ds.object_ids.resize(n_images);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        ds.sample_ids[i] = i;
        ds.object_ids[i] = i;
    }
    ds.validate();
    return ds;
}

void write_idx(const std::string& images_path, const std::string& labels_path,
               const NoisyDataset& ds) {
    if (ds.space != LabelSpace::categorical) {
        throw ArgumentError("write_idx: categorical datasets only");
    }
    if (ds.size() == 0) throw ArgumentError("write_idx: empty dataset");
    const Shape& s0 = ds.inputs[0].shape;
    if (s0.size() != 3 || s0[0] != 1) {
        throw ArgumentError("write_idx: expected single-channel [1,H,W] inputs");
    }
    const std::uint32_t rows = static_cast<std::uint32_t>(s0[1]);
    const std::uint32_t cols = static_cast<std::uint32_t>(s0[2]);

    std::ofstream imgs(images_path, std::ios::binary | std::ios::trunc);
    if (!imgs) throw IoError("cannot open IDX image file for writing: " + images_path);
    std::ofstream labs(labels_path, std::ios::binary | std::ios::trunc);
    if (!labs) throw IoError("cannot open IDX label file for writing: " + labels_path);

    binio::write_u32_be(imgs, kImageMagic);
    binio::write_u32_be(imgs, static_cast<std::uint32_t>(ds.size()));
    binio::write_u32_be(imgs, rows);
    binio::write_u32_be(imgs, cols);
    std::vector<unsigned char> pixel_buf(static_cast<std::size_t>(rows) * cols);
    for (const Tensor& t : ds.inputs) {
        require_shape(t, s0, "write_idx");
        for (std::size_t p = 0; p < pixel_buf.size(); ++p) {
            const double v = std::min(1.0, std::max(0.0, t.data[p]));
            pixel_buf[p] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        binio::write_bytes(imgs, pixel_buf.data(), pixel_buf.size());
    }

    binio::write_u32_be(labs, kLabelMagic);
    binio::write_u32_be(labs, static_cast<std::uint32_t>(ds.size()));
    for (int label : ds.clean_cls) {
        binio::write_u8(labs, static_cast<std::uint8_t>(label));
    }
    imgs.flush();
    labs.flush();
    if (!imgs || !labs) throw IoError("IDX write failed");
}

}  // namespace evolab
