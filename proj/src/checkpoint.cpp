#include "evolab/core/checkpoint.hpp"

#include <fstream>

#include "evolab/core/binio.hpp"
#include "evolab/core/hash.hpp"

namespace evolab {

namespace {

constexpr char kMagic[4] = {'S', 'E', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t content_hash(const std::vector<Tensor>& tensors) {
    Fnv1a h;
    for (const Tensor& t : tensors) {
        h.update_value(static_cast<std::uint8_t>(t.rank()));
        for (std::size_t d : t.shape) h.update_value(static_cast<std::uint32_t>(d));
        h.update(t.data.data(), t.data.size() * sizeof(double));
    }
    return h.digest();
}

}  // namespace

Checkpoint make_checkpoint(std::span<const Tensor* const> params, std::uint32_t layer_count) {
    Checkpoint c;
    c.layer_count = layer_count;
    c.tensors.reserve(params.size());
    for (const Tensor* p : params) c.tensors.push_back(*p);
    c.hash = content_hash(c.tensors);
    return c;
}

void apply_checkpoint(std::span<Tensor* const> params, const Checkpoint& ckpt) {
    if (params.size() != ckpt.tensors.size()) {
        throw CheckpointError("checkpoint holds " + std::to_string(ckpt.tensors.size()) +
                              " tensors, model has " + std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->shape != ckpt.tensors[i].shape) {
            throw CheckpointError("checkpoint tensor " + std::to_string(i) + " shape " +
                                  shape_str(ckpt.tensors[i].shape) + " does not match model shape " +
                                  shape_str(params[i]->shape));
        }
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i]->data = ckpt.tensors[i].data;
    }
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint file for writing: " + path);
    binio::write_bytes(os, kMagic, 4);
    binio::write_u32_le(os, kVersion);
    binio::write_u32_le(os, ckpt.layer_count);
    binio::write_u32_le(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const Tensor& t : ckpt.tensors) {
        binio::write_u8(os, static_cast<std::uint8_t>(t.rank()));
        for (std::size_t d : t.shape) binio::write_u32_le(os, static_cast<std::uint32_t>(d));
        binio::write_f64_array_le(os, t.data.data(), t.data.size());
    }
    binio::write_u64_le(os, ckpt.hash);
    os.flush();
    if (!os) throw IoError("write failed for checkpoint file: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint file: " + path);
    char magic[4];
    binio::read_bytes(is, magic, 4, "checkpoint magic");
    if (std::string(magic, 4) != std::string(kMagic, 4)) {
        throw FormatError("bad checkpoint magic in " + path);
    }
    const std::uint32_t version = binio::read_u32_le(is, "checkpoint version");
    if (version != kVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint c;
    c.layer_count = binio::read_u32_le(is, "checkpoint layer count");
    const std::uint32_t count = binio::read_u32_le(is, "checkpoint tensor count");
    c.tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint8_t rank = binio::read_u8(is, "tensor rank");
        Shape shape(rank);
        for (auto& d : shape) d = binio::read_u32_le(is, "tensor dim");
        Tensor t(shape);
        binio::read_f64_array_le(is, t.data.data(), t.numel(), "tensor payload");
        c.tensors.push_back(std::move(t));
    }
    c.hash = binio::read_u64_le(is, "checkpoint hash");
    if (c.hash != content_hash(c.tensors)) {
        throw CorruptionError("checkpoint content hash mismatch in " + path);
    }
    return c;
}

}  // namespace evolab
