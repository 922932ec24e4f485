#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fishpipe/eval.hpp"
#include "fishpipe/manifest.hpp"

namespace fishpipe {

// --- Stratified recall -----------------------------------------------------

// One evaluated image entering stratification. `recall` is absent for
// background-only images (no ground truth).
struct StratifiedInput {
    std::string image_id;
    int fish_count = 0;
    double overlap = 0.0;    // mean max-IoU structural overlap
    double turbidity = 0.0;
    double blur_var = 0.0;
    std::optional<double> recall;
};

struct StratifiedRecallRow {
    std::string kind;    // "density", "overlap", "turbidity", "blur"
    std::string label;   // bin or quartile label
    int count = 0;
    std::optional<double> mean_recall;  // absent for empty strata
};

// Density strata use the five count bins; overlap and visual strata use
// quartiles of the covariate over images with defined recall.
std::vector<StratifiedRecallRow> stratified_recall(
    const std::vector<StratifiedInput>& inputs);

std::string stratified_recall_csv(const std::vector<StratifiedRecallRow>& rows);

// --- Normalized metric table ----------------------------------------------

struct MetricTableInput {
    std::vector<std::string> metric_names;
    // source -> raw per-source metric means, parallel to metric_names.
    std::map<std::string, std::vector<double>> rows;
};

struct NormalizedMetricTable {
    std::vector<std::string> metric_names;
    std::map<std::string, std::vector<double>> rows;  // normalized to [0,1]
    std::vector<bool> degenerate;                     // constant columns
    std::map<std::string, double> difficulty;
    std::vector<double> weights;  // echoed into the report header
};

// Per-metric min-max normalization of per-source means; constant columns
// normalize to 0 and are flagged.
NormalizedMetricTable min_max_normalize(const MetricTableInput& input,
                                        const std::vector<double>& weights = {});

// Weighted mean of a normalized row; equal weights by default.
double difficulty_index(const std::vector<double>& normalized_row,
                        const std::vector<double>& weights = {});

std::string normalized_table_csv(const NormalizedMetricTable& table);

// --- Correlation -----------------------------------------------------------

struct Correlation {
    std::optional<double> pearson;   // absent on zero-variance input
    std::optional<double> spearman;
};

// Pearson product-moment and Spearman rank coefficients.
// Throws std::invalid_argument on length mismatch or length < 3.
Correlation correlate(const std::vector<double>& x, const std::vector<double>& y);

// --- Edge feasibility ------------------------------------------------------

struct LatencyLogEntry {
    std::string model;
    std::string format;
    std::vector<double> latencies_ms;  // empty together with failed=true
    bool failed = false;               // e.g. OOM
};

struct EdgeBenchRow {
    std::string model;
    std::string format;
    std::string status;                 // "ok" or "failed"
    double mean_latency_ms = 0.0;
    double median_latency_ms = 0.0;
    double fps = 0.0;                   // 1000 / mean latency
    std::optional<double> gain;         // vs the model's first listed format
};

struct EdgeReport {
    std::vector<EdgeBenchRow> rows;
    std::vector<std::string> feasibility;  // one line per ok row
    std::vector<std::string> flags;        // e.g. missing baseline
};

// Gains are computed from FPS rounded to 2 decimals so the emitted table
// is self-consistent with its printed numbers.
EdgeReport edge_report(const std::vector<LatencyLogEntry>& log,
                       long feasibility_frames = 1000);

// Minutes to process n frames at the given throughput.
double minutes_for_frames(long frames, double fps);

// Parses "model,format,latency_ms" lines; non-numeric latency (e.g. OOM)
// marks the (model, format) entry failed.
std::vector<LatencyLogEntry> parse_latency_log_csv(const std::string& text);

std::string edge_report_csv(const EdgeReport& report);

}  // namespace fishpipe
