#pragma once

#include <string>
#include <vector>

#include "fishpipe/manifest.hpp"

namespace fishpipe {

enum class DuplicateReason { kPath, kExact, kPerceptual };

std::string to_string(DuplicateReason r);

struct DuplicateGroup {
    std::vector<std::string> members;  // >= 2 image_ids, sorted
    std::string representative;        // lexicographically smallest member
    DuplicateReason reason = DuplicateReason::kPath;
};

struct DedupResult {
    std::vector<DuplicateGroup> groups;
    std::vector<std::string> removed;    // image_ids dropped
    std::vector<ImageRecord> survivors;  // input order preserved
};

inline constexpr int kDefaultPerceptualThreshold = 5;

// Three-stage protocol: path-level, then perceptual (single-linkage on
// hamming distance <= threshold), then exact (image digest AND label
// digest both equal). Each stage runs on the previous stage's survivors;
// the lexicographically smallest image_id in a group is retained.
DedupResult group_duplicates(const std::vector<ImageRecord>& records,
                             int perceptual_threshold = kDefaultPerceptualThreshold);

// Dedup report CSV: group_id, reason, representative, member, removed.
std::string dedup_report_csv(const DedupResult& result, int perceptual_threshold);

}  // namespace fishpipe
