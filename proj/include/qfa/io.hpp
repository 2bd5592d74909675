#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>

#include "qfa/intertwiner.hpp"

namespace qfa {

// ---------------------------------------------------------------------------
// Stable text formats: tensor block dumps, content hashes, the block cache,
// and the run manifest.  All files begin with a `format=1` line; dumps
// round-trip bit-exactly through parse + serialize.
// ---------------------------------------------------------------------------

inline std::string content_hash(const std::string& data) {
    // FNV-1a, 64 bit
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string index_csv(const MultiIndex& m, int nslots) {
    std::string s;
    for (int t = 0; t < nslots; ++t) {
        if (t) s += ",";
        s += std::to_string(m.get(t));
    }
    return s;
}

struct BlockDump {
    BlockKey key;
    // (out indices, in indices, coefficient) as text, sorted by (out, in)
    std::vector<std::tuple<std::string, std::string, std::string>> entries;
};

struct TensorDump {
    std::string tensor;  // "S" or "J"
    std::string params;  // "canonical" or an explicit list
    std::vector<BlockDump> blocks;

    std::string str() const {
        std::string s = "format=1\n";
        s += "# tensor: " + tensor + "\n";
        s += "# params: " + params + "\n";
        for (const auto& b : blocks) {
            s += "# block: P=" + std::to_string(b.key.P) + ",Q=" +
                 std::to_string(b.key.Q) + "\n";
            for (const auto& [out, in, poly] : b.entries)
                s += out + "|" + in + " -> " + poly + "\n";
        }
        return s;
    }
};

template <class F>
inline BlockDump dump_block(IntertwinerTensor<F>& tensor, const BlockKey& key) {
    const auto& blk = tensor.block(key);
    const int n = TensorShape::of(tensor.kind()).nslots();
    BlockDump bd;
    bd.key = key;
    for (size_t r = 0; r < blk.basis.size(); ++r)
        for (size_t c = 0; c < blk.basis.size(); ++c) {
            const Coefficient& v = blk.col[c][r];
            if (v.is_zero()) continue;
            bd.entries.emplace_back(index_csv(blk.basis[r], n), index_csv(blk.basis[c], n),
                                    print_coefficient(v));
        }
    return bd;
}

template <class F>
inline TensorDump dump_tensor(IntertwinerTensor<F>& tensor, const std::vector<BlockKey>& keys,
                              const std::string& params_desc) {
    TensorDump d;
    d.tensor = kind_name(tensor.kind());
    d.params = params_desc;
    for (const BlockKey& k : keys) d.blocks.push_back(dump_block(tensor, k));
    return d;
}

inline TensorDump parse_dump(const std::string& text) {
    TensorDump d;
    std::istringstream in(text);
    std::string line;
    bool have_format = false, have_tensor = false, have_params = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!have_format) {
            if (line != "format=1")
                throw std::invalid_argument("dump parse: missing format=1 header");
            have_format = true;
        } else if (line.rfind("# tensor: ", 0) == 0) {
            d.tensor = line.substr(10);
            if (d.tensor != "S" && d.tensor != "J")
                throw std::invalid_argument("dump parse: unknown tensor " + d.tensor);
            have_tensor = true;
        } else if (line.rfind("# params: ", 0) == 0) {
            d.params = line.substr(10);
            have_params = true;
        } else if (line.rfind("# block: P=", 0) == 0) {
            size_t comma = line.find(",Q=");
            if (comma == std::string::npos)
                throw std::invalid_argument("dump parse: malformed block header");
            BlockDump b;
            b.key.P = std::stol(line.substr(11, comma - 11));
            b.key.Q = std::stol(line.substr(comma + 3));
            d.blocks.push_back(std::move(b));
        } else {
            if (!have_tensor || !have_params || d.blocks.empty())
                throw std::invalid_argument("dump parse: entry before headers");
            size_t bar = line.find('|');
            size_t arrow = line.find(" -> ");
            if (bar == std::string::npos || arrow == std::string::npos || arrow < bar)
                throw std::invalid_argument("dump parse: malformed entry '" + line + "'");
            std::string out = line.substr(0, bar);
            std::string idx = line.substr(bar + 1, arrow - bar - 1);
            std::string poly = line.substr(arrow + 4);
            parse_coefficient(poly);  // validate
            d.blocks.back().entries.emplace_back(std::move(out), std::move(idx),
                                                 std::move(poly));
        }
    }
    if (!have_format || !have_tensor || !have_params)
        throw std::invalid_argument("dump parse: incomplete headers");
    return d;
}

// ---------------------------------------------------------------------------
// Block cache: one file per tensor block under <dir>/<tensor>/<P>_<Q>.blk,
// with a content-addressed manifest <dir>/cache_manifest.txt.  Stale or
// corrupt files miss instead of failing.
// ---------------------------------------------------------------------------

class BlockCache {
public:
    explicit BlockCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        load_manifest();
    }

    static std::string rel_path(const std::string& tensor, const BlockKey& key) {
        return tensor + "/" + std::to_string(key.P) + "_" + std::to_string(key.Q) + ".blk";
    }

    std::optional<std::string> fetch(const std::string& tensor, const BlockKey& key) {
        std::lock_guard<std::mutex> lock(mu_);
        const std::string rel = rel_path(tensor, key);
        auto it = hashes_.find(rel);
        if (it == hashes_.end()) return std::nullopt;
        std::ifstream in(dir_ / rel, std::ios::binary);
        if (!in) return std::nullopt;
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (content_hash(text) != it->second) return std::nullopt;
        return text;
    }

    void store(const std::string& tensor, const BlockKey& key, const std::string& text) {
        std::lock_guard<std::mutex> lock(mu_);
        const std::string rel = rel_path(tensor, key);
        std::filesystem::create_directories(dir_ / tensor);
        std::ofstream out(dir_ / rel, std::ios::binary | std::ios::trunc);
        out << text;
        out.close();
        hashes_[rel] = content_hash(text);
        save_manifest();
    }

    const std::map<std::string, std::string>& hashes() const { return hashes_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> hashes_;
    std::mutex mu_;

    void load_manifest() {
        std::ifstream in(dir_ / "cache_manifest.txt");
        if (!in) return;
        std::string line;
        if (!std::getline(in, line) || line != "format=1") return;
        while (std::getline(in, line)) {
            size_t sp = line.rfind(' ');
            if (sp == std::string::npos) continue;
            hashes_[line.substr(0, sp)] = line.substr(sp + 1);
        }
    }

    void save_manifest() {
        std::ofstream out(dir_ / "cache_manifest.txt", std::ios::trunc);
        out << "format=1\n";
        for (const auto& [rel, h] : hashes_) out << rel << " " << h << "\n";
    }
};

// ---------------------------------------------------------------------------
// Run manifest: one key=value record of a command invocation and the
// artifacts it produced.  Deterministic except for the wall_ms field.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::string params;
    long window = -1;
    long max_block = -1;
    std::string mode;
    int jobs = 1;
    std::vector<std::pair<std::string, std::string>> artifacts;  // relpath, hash
    long wall_ms = 0;

    void add_artifact(const std::string& rel, const std::string& contents) {
        artifacts.emplace_back(rel, content_hash(contents));
    }

    std::string str() const {
        std::string s = "format=1\n";
        s += "command=" + command + "\n";
        s += "params=" + params + "\n";
        if (window >= 0) s += "window=" + std::to_string(window) + "\n";
        if (max_block >= 0) s += "max_block=" + std::to_string(max_block) + "\n";
        s += "mode=" + mode + "\n";
        s += "jobs=" + std::to_string(jobs) + "\n";
        for (const auto& [rel, h] : artifacts) s += "artifact=" + rel + " hash=" + h + "\n";
        s += "wall_ms=" + std::to_string(wall_ms) + "\n";
        return s;
    }
};

}  // namespace qfa
