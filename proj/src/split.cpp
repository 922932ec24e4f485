#include "fishpipe/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace fishpipe {

StratumKey stratum_key(const ImageRecord& record) {
    return {record.source, !record.annotations.empty()};
}

bool plan_valid(const SplitPlan& plan) {
    const double sum = plan.train_ratio + plan.val_ratio + plan.test_ratio;
    return plan.train_ratio > 0.0 && plan.train_ratio < 1.0 &&
           plan.val_ratio > 0.0 && plan.val_ratio < 1.0 &&
           plan.test_ratio > 0.0 && plan.test_ratio < 1.0 &&
           std::abs(sum - 1.0) <= 1e-9;
}

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Fisher-Yates with raw mt19937_64 draws; std::shuffle and the stdlib
// distributions are implementation-defined, this is not.
void seeded_shuffle(std::vector<int>& idx, uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng() % i]);
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

SplitAssignment two_step_split(const std::vector<ImageRecord>& records,
                               const SplitPlan& plan) {
    if (!plan_valid(plan)) throw std::invalid_argument("invalid split plan");
    if (records.empty()) throw std::invalid_argument("no records to split");

    SplitAssignment out;
    out.assignment.assign(records.size(), Split::kUnassigned);

    std::map<StratumKey, std::vector<int>> strata;
    for (size_t i = 0; i < records.size(); ++i)
        strata[stratum_key(records[i])].push_back(static_cast<int>(i));

    for (auto& [key, idx] : strata) {
        // Sort by image_id first so the shuffle sees a canonical order.
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return records[a].image_id < records[b].image_id;
        });
        const std::string key_str = key.source + (key.has_annotations ? "|pos" : "|neg");
        if (idx.size() < 3) {
            out.warnings.push_back("stratum " + key_str + " has " +
                                   std::to_string(idx.size()) +
                                   " record(s); all assigned to train");
            for (int i : idx) out.assignment[i] = Split::kTrain;
            continue;
        }
        seeded_shuffle(idx, plan.seed ^ fnv1a(key_str));

        const int n = static_cast<int>(idx.size());
        // Step 1: held-out test draw.
        const int n_test = std::clamp(round_half_up(n * plan.test_ratio), 0, n);
        // Step 2: remainder split at train/(train+val).
        const int rem = n - n_test;
        const double train_frac = plan.train_ratio / (plan.train_ratio + plan.val_ratio);
        const int n_train = std::clamp(round_half_up(rem * train_frac), 0, rem);
        for (int i = 0; i < n_test; ++i) out.assignment[idx[i]] = Split::kTest;
        for (int i = n_test; i < n_test + n_train; ++i)
            out.assignment[idx[i]] = Split::kTrain;
        for (int i = n_test + n_train; i < n; ++i)
            out.assignment[idx[i]] = Split::kVal;
    }
    return out;
}

std::string split_summary_csv(const std::vector<ImageRecord>& records,
                              const std::vector<Split>& assignment) {
    struct Counts { int n = 0, train = 0, val = 0, test = 0; };
    std::map<StratumKey, Counts> table;
    for (size_t i = 0; i < records.size(); ++i) {
        auto& c = table[stratum_key(records[i])];
        ++c.n;
        switch (assignment[i]) {
            case Split::kTrain: ++c.train; break;
            case Split::kVal: ++c.val; break;
            case Split::kTest: ++c.test; break;
            default: break;
        }
    }
    std::string csv = "stratum,n,n_train,n_val,n_test\n";
    for (const auto& [key, c] : table) {
        csv += key.source + (key.has_annotations ? "|pos" : "|neg") + "," +
               std::to_string(c.n) + "," + std::to_string(c.train) + "," +
               std::to_string(c.val) + "," + std::to_string(c.test) + "\n";
    }
    return csv;
}

}  // namespace fishpipe
