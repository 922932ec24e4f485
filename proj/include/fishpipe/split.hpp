#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fishpipe/manifest.hpp"

namespace fishpipe {

struct StratumKey {
    std::string source;
    bool has_annotations = false;

    bool operator==(const StratumKey&) const = default;
    auto operator<=>(const StratumKey&) const = default;
};

StratumKey stratum_key(const ImageRecord& record);

struct SplitPlan {
    double train_ratio = 0.70;
    double val_ratio = 0.20;
    double test_ratio = 0.10;
    uint64_t seed = 0;
};

bool plan_valid(const SplitPlan& plan);

struct SplitAssignment {
    std::vector<Split> assignment;          // parallel to the input records
    std::vector<std::string> warnings;      // e.g. tiny strata
};

// Stratified two-step split: per stratum, first draw the test set with a
// seeded shuffle, then split the remainder into train/val. Deterministic
// in (record image_ids, plan); machine independent.
SplitAssignment two_step_split(const std::vector<ImageRecord>& records,
                               const SplitPlan& plan);

// Summary CSV: stratum, n, n_train, n_val, n_test.
std::string split_summary_csv(const std::vector<ImageRecord>& records,
                              const std::vector<Split>& assignment);

}  // namespace fishpipe
