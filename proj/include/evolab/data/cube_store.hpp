#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evolab/data/cube.hpp"

namespace evolab {

// Append-only binary cube container.
//
//   header : magic "EVOC", u32 version, u64 run id, u64 checkpoint hash,
//            u8 mode, u32 t_support, u32 t_selfish, 2x solver config (5 f64)
//   record : u64 sample id, u32 T, u32 phase boundary, u8 failed, u8 rank,
//            u32 dims..., f64 payload (T x numel), u64 record hash
//   footer : u64 count, count x (u64 sample id, u64 offset), u64 index hash,
//            u64 footer offset, magic "EVOX"
//
// The footer is written on finalize; a store missing it (crash, partial
// trailing write) is recovered by scanning whole valid records from the top.
struct CubeStoreMeta {
    std::uint64_t run_id = 0;
    std::uint64_t checkpoint_hash = 0;
    std::uint8_t mode = 0;  // 0 selfish-only, 1 support-then-selfish
    std::uint32_t t_support = 0;
    std::uint32_t t_selfish = 0;
    SolverConfig support_cfg;
    SolverConfig selfish_cfg;
};

class CubeStoreWriter {
public:
    CubeStoreWriter(const std::string& path, const CubeStoreMeta& meta);
    ~CubeStoreWriter();

    CubeStoreWriter(const CubeStoreWriter&) = delete;
    CubeStoreWriter& operator=(const CubeStoreWriter&) = delete;

    void append(const EvolutionCube& cube);
    void finalize();
    std::size_t record_count() const { return index_.size(); }

private:
    std::ofstream os_;
    std::string path_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> index_;
    std::uint64_t offset_ = 0;
    bool finalized_ = false;
};

class CubeStoreReader {
public:
    explicit CubeStoreReader(const std::string& path);

    const CubeStoreMeta& meta() const { return meta_; }
    bool recovered() const { return recovered_; }

    // sample ids in file (= append) order
    const std::vector<std::uint64_t>& ids() const { return ids_; }
    bool contains(std::uint64_t sample_id) const { return index_.count(sample_id) > 0; }

    EvolutionCube read(std::uint64_t sample_id);

    // Throws CorruptionError when the store was produced from a different
    // checkpoint than the caller expects.
    void require_checkpoint(std::uint64_t expected_hash) const;

private:
    std::ifstream is_;
    std::string path_;
    CubeStoreMeta meta_;
    std::map<std::uint64_t, std::uint64_t> index_;
    std::vector<std::uint64_t> ids_;
    bool recovered_ = false;
};

// Rewrites a store footer after scanning valid records, truncating any
// partial trailing write. Returns the surviving record count.
std::size_t repair_cube_store(const std::string& path);

}  // namespace evolab
