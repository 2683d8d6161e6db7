#include "evolab/data/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "evolab/core/hash.hpp"
#include "evolab/data/cube_store.hpp"

namespace evolab {

void NoisyDataset::validate() const {
    const std::size_t n = inputs.size();
    if (sample_ids.size() != n || object_ids.size() != n) {
        throw DimensionError("dataset: id tracks do not match sample count");
    }
    if (space == LabelSpace::categorical) {
        if (labels_cls.size() != n || clean_cls.size() != n) {
            throw DimensionError("dataset: categorical label tracks do not match sample count");
        }
        if (classes < 2) throw DimensionError("dataset: categorical label space needs >= 2 classes");
        for (int v : labels_cls) {
            if (v < 0 || static_cast<std::size_t>(v) >= classes) {
                throw DimensionError("dataset: label " + std::to_string(v) + " outside [0," +
                                     std::to_string(classes) + ")");
            }
        }
        for (int v : clean_cls) {
            if (v < 0 || static_cast<std::size_t>(v) >= classes) {
                throw DimensionError("dataset: clean label outside label space");
            }
        }
    } else {
        if (labels_map.size() != n || clean_map.size() != n) {
            throw DimensionError("dataset: heat-map label tracks do not match sample count");
        }
        for (const Tensor& m : labels_map) {
            require_shape(m, {1, map_h, map_w}, "dataset heat-map label");
            double mx = 0.0;
            for (double v : m.data) {
                if (v < 0.0) throw DimensionError("dataset: heat-map labels must be non-negative");
                mx = std::max(mx, v);
            }
            if (mx > 1.0 + 1e-9) throw DimensionError("dataset: heat-map label max exceeds 1");
        }
    }
}

SplitPair split(const NoisyDataset& dataset, std::size_t gold_count, std::uint64_t /*seed*/) {
    dataset.validate();
    const std::size_t n = dataset.size();
    if (gold_count >= n) {
        throw ArgumentError("split: gold count " + std::to_string(gold_count) +
                            " must be smaller than dataset size " + std::to_string(n));
    }

    std::vector<std::uint8_t> to_gold(n, 0);
    if (dataset.space == LabelSpace::categorical) {
        // positional: first n-gold_count train, last gold_count gold
        for (std::size_t i = n - gold_count; i < n; ++i) to_gold[i] = 1;
    } else {
        // whole objects move to gold, scanning object ids from the end,
        // until at least gold_count samples have accumulated
        std::vector<std::uint64_t> unique_objects;
        std::unordered_set<std::uint64_t> seen;
        for (std::uint64_t obj : dataset.object_ids) {
            if (seen.insert(obj).second) unique_objects.push_back(obj);
        }
        std::unordered_map<std::uint64_t, std::size_t> object_sizes;
        for (std::uint64_t obj : dataset.object_ids) object_sizes[obj] += 1;

        std::unordered_set<std::uint64_t> gold_objects;
        std::size_t acc = 0;
        for (auto it = unique_objects.rbegin(); it != unique_objects.rend() && acc < gold_count; ++it) {
            gold_objects.insert(*it);
            acc += object_sizes[*it];
        }
        if (acc >= n) throw ArgumentError("split: gold selection would consume the whole dataset");
        for (std::size_t i = 0; i < n; ++i) {
            if (gold_objects.count(dataset.object_ids[i])) to_gold[i] = 1;
        }
    }

    SplitPair out;
    for (NoisyDataset* part : {&out.train, &out.gold}) {
        part->space = dataset.space;
        part->classes = dataset.classes;
        part->map_h = dataset.map_h;
        part->map_w = dataset.map_w;
    }
    for (std::size_t i = 0; i < n; ++i) {
        NoisyDataset& part = to_gold[i] ? out.gold : out.train;
        part.inputs.push_back(dataset.inputs[i]);
        part.sample_ids.push_back(dataset.sample_ids[i]);
        part.object_ids.push_back(dataset.object_ids[i]);
        if (dataset.space == LabelSpace::categorical) {
            part.labels_cls.push_back(dataset.labels_cls[i]);
            part.clean_cls.push_back(dataset.clean_cls[i]);
        } else {
            part.labels_map.push_back(dataset.labels_map[i]);
            part.clean_map.push_back(dataset.clean_map[i]);
        }
    }
    out.train.validate();
    out.gold.validate();
    return out;
}

std::string label_digest(const NoisyDataset& ds, std::size_t idx) {
    Fnv1a h;
    if (ds.space == LabelSpace::categorical) {
        const std::int64_t v = ds.labels_cls[idx];
        h.update_value(v);
    } else {
        const Tensor& m = ds.labels_map[idx];
        h.update(m.data.data(), m.data.size() * sizeof(double));
    }
    return hash_hex(h.digest());
}

Manifest manifest_of(const NoisyDataset& ds, const std::vector<std::uint8_t>* flipped,
                     const std::vector<std::uint8_t>* changed) {
    if (flipped && flipped->size() != ds.size()) throw DimensionError("manifest: flipped mask size");
    if (changed && changed->size() != ds.size()) throw DimensionError("manifest: changed mask size");
    Manifest m;
    m.space = ds.space;
    m.rows.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        ManifestRow row;
        row.sample_id = ds.sample_ids[i];
        row.object_id = ds.object_ids[i];
        row.label = ds.space == LabelSpace::categorical ? ds.labels_cls[i] : -1;
        row.digest = label_digest(ds, i);
        row.flipped = flipped && (*flipped)[i];
        row.changed = changed && (*changed)[i];
        m.rows.push_back(std::move(row));
    }
    return m;
}

void write_manifest(const std::string& path, const Manifest& m) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open manifest for writing: " + path);
    os << "evolab-manifest\tv1\t"
       << (m.space == LabelSpace::categorical ? "categorical" : "heatmap") << "\n";
    os << "sample_id\tobject_id\tlabel\tdigest\tflipped\tchanged\n";
    for (const ManifestRow& r : m.rows) {
        os << r.sample_id << '\t' << r.object_id << '\t';
        if (m.space == LabelSpace::categorical) {
            os << r.label;
        } else {
            os << '-';
        }
        os << '\t' << r.digest << '\t' << (r.flipped ? 1 : 0) << '\t' << (r.changed ? 1 : 0) << "\n";
    }
    os.flush();
    if (!os) throw IoError("manifest write failed: " + path);
}

Manifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(is, line)) throw FormatError("manifest is empty: " + path);
    std::istringstream head(line);
    std::string tag, version, space;
    head >> tag >> version >> space;
    if (tag != "evolab-manifest" || version != "v1") {
        throw FormatError("unrecognized manifest header in " + path);
    }
    Manifest m;
    if (space == "categorical") {
        m.space = LabelSpace::categorical;
    } else if (space == "heatmap") {
        m.space = LabelSpace::heatmap;
    } else {
        throw FormatError("unknown manifest label space '" + space + "' in " + path);
    }
    if (!std::getline(is, line)) throw FormatError("manifest missing column header: " + path);

    std::size_t lineno = 2;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        ManifestRow r;
        std::string label_field;
        int flipped = 0, changed = 0;
        if (!(row >> r.sample_id >> r.object_id >> label_field >> r.digest >> flipped >> changed)) {
            throw FormatError("malformed manifest row at " + path + ":" + std::to_string(lineno));
        }
        if (m.space == LabelSpace::categorical) {
            try {
                r.label = std::stoi(label_field);
            } catch (...) {
                throw FormatError("bad label field at " + path + ":" + std::to_string(lineno));
            }
        }
        r.flipped = flipped != 0;
        r.changed = changed != 0;
        m.rows.push_back(std::move(r));
    }
    return m;
}

std::vector<std::uint8_t> apply_manifest_labels(NoisyDataset& ds, const Manifest& m,
                                                const std::string& map_store_path) {
    if (m.space != ds.space) throw ArgumentError("manifest label space does not match dataset");
    if (m.rows.size() != ds.size()) {
        throw ArgumentError("manifest has " + std::to_string(m.rows.size()) + " rows, dataset has " +
                            std::to_string(ds.size()) + " samples");
    }
    std::unordered_map<std::uint64_t, std::size_t> by_id;
    for (std::size_t i = 0; i < ds.size(); ++i) by_id[ds.sample_ids[i]] = i;

    std::vector<std::uint8_t> flipped(ds.size(), 0);
    std::unique_ptr<CubeStoreReader> maps;
    if (ds.space == LabelSpace::heatmap) {
        if (map_store_path.empty()) {
            throw ArgumentError("heat-map manifest needs a sidecar label store path");
        }
        maps = std::make_unique<CubeStoreReader>(map_store_path);
    }

    for (const ManifestRow& r : m.rows) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end()) {
            throw LookupError("manifest row references unknown sample id " +
                              std::to_string(r.sample_id));
        }
        const std::size_t i = it->second;
        if (ds.space == LabelSpace::categorical) {
            if (r.label < 0 || static_cast<std::size_t>(r.label) >= ds.classes) {
                throw FormatError("manifest label outside label space for sample " +
                                  std::to_string(r.sample_id));
            }
            ds.labels_cls[i] = r.label;
        } else {
            EvolutionCube rec = maps->read(r.sample_id);
            if (rec.slices.size() != 1) {
                throw FormatError("label store record for sample " + std::to_string(r.sample_id) +
                                  " is not a single map");
            }
            require_shape(rec.slices[0], {1, ds.map_h, ds.map_w}, "label store map");
            ds.labels_map[i] = std::move(rec.slices[0]);
        }
        if (label_digest(ds, i) != r.digest) {
            throw CorruptionError("label digest mismatch for sample " + std::to_string(r.sample_id));
        }
        flipped[i] = r.flipped ? 1 : 0;
    }
    ds.validate();
    return flipped;
}

void write_label_maps(const std::string& path, const NoisyDataset& ds) {
    if (ds.space != LabelSpace::heatmap) {
        throw ArgumentError("write_label_maps: heat-map datasets only");
    }
    CubeStoreMeta meta;  // label stores carry no evolution provenance
    CubeStoreWriter writer(path, meta);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EvolutionCube rec;
        rec.sample_id = ds.sample_ids[i];
        rec.slice_shape = ds.labels_map[i].shape;
        rec.slices.push_back(ds.labels_map[i]);
        writer.append(rec);
    }
    writer.finalize();
}

}  // namespace evolab
