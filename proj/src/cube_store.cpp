#include "evolab/data/cube_store.hpp"

#include <cstring>
#include <filesystem>

#include "evolab/core/binio.hpp"
#include "evolab/core/hash.hpp"

namespace evolab {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'O', 'C'};
constexpr char kFooterMagic[4] = {'E', 'V', 'O', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_solver(std::vector<unsigned char>& buf, const SolverConfig& c) {
    binio::put_f64_le(buf, c.learning_rate);
    binio::put_f64_le(buf, c.weight_decay);
    binio::put_f64_le(buf, c.beta1);
    binio::put_f64_le(buf, c.beta2);
    binio::put_f64_le(buf, c.epsilon);
}

SolverConfig read_solver(std::istream& is) {
    SolverConfig c;
    c.learning_rate = binio::read_f64_le(is, "solver lr");
    c.weight_decay = binio::read_f64_le(is, "solver wd");
    c.beta1 = binio::read_f64_le(is, "solver beta1");
    c.beta2 = binio::read_f64_le(is, "solver beta2");
    c.epsilon = binio::read_f64_le(is, "solver epsilon");
    return c;
}

std::vector<unsigned char> header_bytes(const CubeStoreMeta& meta) {
    std::vector<unsigned char> buf;
    buf.insert(buf.end(), kMagic, kMagic + 4);
    binio::put_u32_le(buf, kVersion);
    binio::put_u64_le(buf, meta.run_id);
    binio::put_u64_le(buf, meta.checkpoint_hash);
    binio::put_u8(buf, meta.mode);
    binio::put_u32_le(buf, meta.t_support);
    binio::put_u32_le(buf, meta.t_selfish);
    put_solver(buf, meta.support_cfg);
    put_solver(buf, meta.selfish_cfg);
    return buf;
}

std::vector<unsigned char> record_bytes(const EvolutionCube& cube) {
    cube.validate();
    std::vector<unsigned char> buf;
    binio::put_u64_le(buf, cube.sample_id);
    binio::put_u32_le(buf, static_cast<std::uint32_t>(cube.slices.size()));
    binio::put_u32_le(buf, cube.phase_boundary);
    binio::put_u8(buf, cube.failed ? 1 : 0);
    binio::put_u8(buf, static_cast<std::uint8_t>(cube.slice_shape.size()));
    for (std::size_t d : cube.slice_shape) binio::put_u32_le(buf, static_cast<std::uint32_t>(d));
    for (const Tensor& s : cube.slices) {
        const std::size_t start = buf.size();
        buf.resize(start + s.data.size() * sizeof(double));
        std::memcpy(buf.data() + start, s.data.data(), s.data.size() * sizeof(double));
    }
    binio::put_u64_le(buf, fnv1a(buf.data(), buf.size()));
    return buf;
}

// Parses one record starting at the current stream position. Returns nullopt
// on any truncation or hash mismatch (used by recovery scans); `strict`
// converts those into exceptions.
std::optional<EvolutionCube> parse_record(std::istream& is, const CubeStoreMeta& meta, bool strict,
                                          const std::string& path) {
    auto fail = [&](const std::string& why) -> std::optional<EvolutionCube> {
        if (strict) throw CorruptionError("cube store " + path + ": " + why);
        return std::nullopt;
    };
    Fnv1a hasher;
    EvolutionCube cube;
    try {
        cube.sample_id = binio::read_u64_le(is, "record sample id");
        const std::uint32_t t = binio::read_u32_le(is, "record step count");
        cube.phase_boundary = binio::read_u32_le(is, "record phase boundary");
        const std::uint8_t failed = binio::read_u8(is, "record failed flag");
        const std::uint8_t rank = binio::read_u8(is, "record rank");
        if (rank > 8) return fail("implausible slice rank");
        hasher.update_value(cube.sample_id);
        hasher.update_value(t);
        hasher.update_value(cube.phase_boundary);
        hasher.update_value(failed);
        hasher.update_value(rank);
        cube.failed = failed != 0;
        cube.slice_shape.resize(rank);
        for (auto& d : cube.slice_shape) {
            std::uint32_t v = binio::read_u32_le(is, "record dim");
            hasher.update_value(v);
            d = v;
        }
        const std::size_t numel = numel_of(cube.slice_shape);
        if (numel == 0 || numel > (1u << 24)) return fail("implausible slice size");
        if (t > (1u << 20)) return fail("implausible step count");
        cube.slices.reserve(t);
        for (std::uint32_t i = 0; i < t; ++i) {
            Tensor s(cube.slice_shape);
            binio::read_f64_array_le(is, s.data.data(), numel, "record payload");
            hasher.update(s.data.data(), numel * sizeof(double));
            cube.slices.push_back(std::move(s));
        }
        const std::uint64_t stored = binio::read_u64_le(is, "record hash");
        if (stored != hasher.digest()) return fail("record hash mismatch");
        if (cube.phase_boundary > t) return fail("phase boundary out of range");
    } catch (const FormatError&) {
        return fail("truncated record");
    }
    cube.checkpoint_hash = meta.checkpoint_hash;
    cube.support_cfg = meta.support_cfg;
    cube.selfish_cfg = meta.selfish_cfg;
    return cube;
}

CubeStoreMeta read_header(std::istream& is, const std::string& path) {
    char magic[4];
    binio::read_bytes(is, magic, 4, "store magic");
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad cube store magic in " + path);
    const std::uint32_t version = binio::read_u32_le(is, "store version");
    if (version != kVersion) throw FormatError("unsupported cube store version");
    CubeStoreMeta meta;
    meta.run_id = binio::read_u64_le(is, "store run id");
    meta.checkpoint_hash = binio::read_u64_le(is, "store checkpoint hash");
    meta.mode = binio::read_u8(is, "store mode");
    meta.t_support = binio::read_u32_le(is, "store t_support");
    meta.t_selfish = binio::read_u32_le(is, "store t_selfish");
    meta.support_cfg = read_solver(is);
    meta.selfish_cfg = read_solver(is);
    return meta;
}

}  // namespace

CubeStoreWriter::CubeStoreWriter(const std::string& path, const CubeStoreMeta& meta)
    : os_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!os_) throw IoError("cannot open cube store for writing: " + path);
    const auto hdr = header_bytes(meta);
    binio::write_bytes(os_, hdr.data(), hdr.size());
    offset_ = hdr.size();
}

CubeStoreWriter::~CubeStoreWriter() {
    try {
        if (!finalized_) finalize();
    } catch (...) {
        // destructor must not throw; an unfinalized store is recoverable
    }
}

void CubeStoreWriter::append(const EvolutionCube& cube) {
    if (finalized_) throw IoError("cube store already finalized: " + path_);
    const auto rec = record_bytes(cube);
    binio::write_bytes(os_, rec.data(), rec.size());
    index_.emplace_back(cube.sample_id, offset_);
    offset_ += rec.size();
}

void CubeStoreWriter::finalize() {
    if (finalized_) return;
    std::vector<unsigned char> buf;
    binio::put_u64_le(buf, index_.size());
    for (const auto& [id, off] : index_) {
        binio::put_u64_le(buf, id);
        binio::put_u64_le(buf, off);
    }
    binio::put_u64_le(buf, fnv1a(buf.data(), buf.size()));
    binio::put_u64_le(buf, offset_);  // where the footer begins
    buf.insert(buf.end(), kFooterMagic, kFooterMagic + 4);
    binio::write_bytes(os_, buf.data(), buf.size());
    os_.flush();
    if (!os_) throw IoError("cube store write failed: " + path_);
    os_.close();
    finalized_ = true;
}

CubeStoreReader::CubeStoreReader(const std::string& path)
    : is_(path, std::ios::binary), path_(path) {
    if (!is_) throw IoError("cannot open cube store: " + path);
    meta_ = read_header(is_, path_);
    const std::uint64_t data_start = static_cast<std::uint64_t>(is_.tellg());

    // try the footer first
    is_.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(is_.tellg());
    bool footer_ok = false;
    if (file_size >= data_start + 12) {
        is_.seekg(static_cast<std::streamoff>(file_size - 12));
        const std::uint64_t footer_off = binio::read_u64_le(is_, "footer offset");
        char magic[4];
        binio::read_bytes(is_, magic, 4, "footer magic");
        if (std::memcmp(magic, kFooterMagic, 4) == 0 && footer_off >= data_start &&
            footer_off < file_size) {
            is_.seekg(static_cast<std::streamoff>(footer_off));
            std::vector<unsigned char> buf;
            const std::uint64_t count = binio::read_u64_le(is_, "index count");
            if (count < (1ull << 32)) {
                binio::put_u64_le(buf, count);
                bool plausible = true;
                std::map<std::uint64_t, std::uint64_t> idx;
                std::vector<std::uint64_t> order;
                for (std::uint64_t i = 0; i < count && plausible; ++i) {
                    const std::uint64_t id = binio::read_u64_le(is_, "index id");
                    const std::uint64_t off = binio::read_u64_le(is_, "index offset");
                    binio::put_u64_le(buf, id);
                    binio::put_u64_le(buf, off);
                    if (off < data_start || off >= footer_off) plausible = false;
                    idx[id] = off;
                    order.push_back(id);
                }
                if (plausible) {
                    const std::uint64_t stored = binio::read_u64_le(is_, "index hash");
                    if (stored == fnv1a(buf.data(), buf.size())) {
                        index_ = std::move(idx);
                        ids_ = std::move(order);
                        footer_ok = true;
                    }
                }
            }
        }
    }

    if (!footer_ok) {
        // missing or damaged footer: recover whole valid records from the top
        recovered_ = true;
        is_.clear();
        is_.seekg(static_cast<std::streamoff>(data_start));
        while (true) {
            const std::uint64_t offset = static_cast<std::uint64_t>(is_.tellg());
            auto cube = parse_record(is_, meta_, false, path_);
            if (!cube) break;
            index_[cube->sample_id] = offset;
            ids_.push_back(cube->sample_id);
        }
        is_.clear();
    }
}

EvolutionCube CubeStoreReader::read(std::uint64_t sample_id) {
    auto it = index_.find(sample_id);
    if (it == index_.end()) {
        throw LookupError("cube store " + path_ + ": unknown sample id " + std::to_string(sample_id));
    }
    is_.clear();
    is_.seekg(static_cast<std::streamoff>(it->second));
    auto cube = parse_record(is_, meta_, true, path_);
    return *cube;
}

void CubeStoreReader::require_checkpoint(std::uint64_t expected_hash) const {
    if (meta_.checkpoint_hash != expected_hash) {
        throw CorruptionError("cube store " + path_ + " was generated from checkpoint " +
                              hash_hex(meta_.checkpoint_hash) + ", expected " +
                              hash_hex(expected_hash));
    }
}

std::size_t repair_cube_store(const std::string& path) {
    CubeStoreReader reader(path);
    const CubeStoreMeta meta = reader.meta();
    std::vector<EvolutionCube> cubes;
    cubes.reserve(reader.ids().size());
    for (std::uint64_t id : reader.ids()) cubes.push_back(reader.read(id));

    const std::string tmp = path + ".repair";
    {
        CubeStoreWriter w(tmp, meta);
        for (const auto& c : cubes) w.append(c);
        w.finalize();
    }
    std::filesystem::rename(tmp, path);
    return cubes.size();
}

}  // namespace evolab
