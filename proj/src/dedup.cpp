#include "fishpipe/dedup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "fishpipe/hashing.hpp"
#include "fishpipe/yolo.hpp"

namespace fishpipe {

std::string to_string(DuplicateReason r) {
    switch (r) {
        case DuplicateReason::kPath: return "path";
        case DuplicateReason::kExact: return "exact";
        default: return "perceptual";
    }
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Collapses clusters of >= 2 into groups; keeps the lexicographically
// smallest image_id of each cluster, erasing the rest from `alive`.
void emit_groups(const std::vector<ImageRecord>& records,
                 std::vector<bool>& alive, UnionFind& uf,
                 DuplicateReason reason, DedupResult& out) {
    std::map<int, std::vector<int>> clusters;
    for (size_t i = 0; i < records.size(); ++i)
        if (alive[i]) clusters[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    for (auto& [root, idxs] : clusters) {
        if (idxs.size() < 2) continue;
        DuplicateGroup g;
        g.reason = reason;
        for (int i : idxs) g.members.push_back(records[i].image_id);
        std::sort(g.members.begin(), g.members.end());
        g.representative = g.members.front();
        for (int i : idxs)
            if (records[i].image_id != g.representative) {
                alive[i] = false;
                out.removed.push_back(records[i].image_id);
            }
        out.groups.push_back(std::move(g));
    }
}

}  // namespace

DedupResult group_duplicates(const std::vector<ImageRecord>& records,
                             int perceptual_threshold) {
    if (perceptual_threshold < 0 || perceptual_threshold > 64)
        throw std::invalid_argument("perceptual threshold must be in [0,64]");
    const size_t n = records.size();
    DedupResult out;
    std::vector<bool> alive(n, true);

    // Stage 1: path-level duplicate references.
    {
        UnionFind uf(n);
        std::map<std::string, int> by_path;
        for (size_t i = 0; i < n; ++i) {
            auto [it, inserted] = by_path.try_emplace(records[i].path, static_cast<int>(i));
            if (!inserted) uf.unite(static_cast<int>(i), it->second);
        }
        emit_groups(records, alive, uf, DuplicateReason::kPath, out);
    }

    // Stage 2: near-duplicates, single-linkage on the average hash.
    {
        UnionFind uf(n);
        std::vector<int> idx;
        for (size_t i = 0; i < n; ++i)
            if (alive[i]) idx.push_back(static_cast<int>(i));
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = a + 1; b < idx.size(); ++b)
                if (hamming(records[idx[a]].perceptual_hash,
                            records[idx[b]].perceptual_hash) <= perceptual_threshold)
                    uf.unite(idx[a], idx[b]);
        emit_groups(records, alive, uf, DuplicateReason::kPerceptual, out);
    }

    // Stage 3: exact duplicates. Both the image digest and the label
    // digest must match; identical pixels with different labels are kept.
    {
        UnionFind uf(n);
        std::map<std::pair<std::string, std::string>, int> by_digest;
        for (size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            const std::string label_digest = md5_hex(serialize_yolo(records[i].annotations));
            auto key = std::make_pair(records[i].content_digest, label_digest);
            auto [it, inserted] = by_digest.try_emplace(key, static_cast<int>(i));
            if (!inserted) uf.unite(static_cast<int>(i), it->second);
        }
        emit_groups(records, alive, uf, DuplicateReason::kExact, out);
    }

    for (size_t i = 0; i < n; ++i)
        if (alive[i]) out.survivors.push_back(records[i]);
    return out;
}

std::string dedup_report_csv(const DedupResult& result, int perceptual_threshold) {
    std::string csv = "# ahash 8x8, perceptual hamming threshold " +
                      std::to_string(perceptual_threshold) + "\n";
    csv += "group_id,reason,representative,member,removed\n";
    for (size_t g = 0; g < result.groups.size(); ++g) {
        const auto& group = result.groups[g];
        for (const auto& m : group.members) {
            csv += std::to_string(g) + "," + to_string(group.reason) + "," +
                   group.representative + "," + m + "," +
                   (m == group.representative ? "false" : "true") + "\n";
        }
    }
    return csv;
}

}  // namespace fishpipe
