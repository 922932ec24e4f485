#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fishpipe/geometry.hpp"
#include "fishpipe/yolo.hpp"

namespace fishpipe {

// One image's predictions paired with its ground truth.
struct ImageEvalInput {
    std::string image_id;
    std::vector<Detection> detections;
    std::vector<NormalizedBox> ground_truths;
};

struct MatchResult {
    std::vector<std::pair<int, int>> tp;  // (detection index, ground-truth index)
    std::vector<int> fp;                  // unmatched detection indices
    std::vector<int> fn;                  // unmatched ground-truth indices
};

// Greedy matching: detections in descending confidence (ties by
// descending best IoU, then input order), each taking the unmatched
// ground truth of highest IoU >= threshold.
MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<NormalizedBox>& ground_truths,
                             double iou_threshold);

struct PrPoint {
    double confidence = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct ApResult {
    double ap = 0.0;
    std::vector<PrPoint> curve;
};

// Global confidence-sorted sweep; AP by 101-point interpolated precision
// (COCO recall grid). Throws std::domain_error with zero ground truths.
ApResult pr_curve_and_ap(const std::vector<ImageEvalInput>& inputs,
                         double iou_threshold);

// (mAP50, mAP50-95) over thresholds 0.50..0.95 step 0.05.
std::pair<double, double> map_range(const std::vector<ImageEvalInput>& inputs);

struct Prf {
    long tp = 0, fp = 0, fn = 0;
    std::optional<double> precision;  // empty when TP+FP = 0
    std::optional<double> recall;     // empty when TP+FN = 0
    double f1 = 0.0;                  // 0 when P+R = 0 or either undefined
};

Prf prf(long tp, long fp, long fn);

struct PerImageRecall {
    std::string image_id;
    int gt_count = 0;
    int tp_count = 0;
    double recall = 0.0;
};

inline constexpr double kDefaultConfCutoff = 0.25;

// Recall per image at IoU 0.5; images without ground truth are excluded.
std::vector<PerImageRecall> per_image_recall(
    const std::vector<ImageEvalInput>& inputs,
    double conf_cutoff = kDefaultConfCutoff);

struct EvalSettings {
    double iou_threshold = 0.5;    // operating-point matching threshold
    double conf_cutoff = kDefaultConfCutoff;
};

struct EvalReport {
    double map50 = 0.0;
    double map50_95 = 0.0;
    Prf operating_point;
    std::vector<PerImageRecall> image_recalls;
    std::vector<PrPoint> curve50;
    EvalSettings settings;
};

EvalReport evaluate_corpus(const std::vector<ImageEvalInput>& inputs,
                           const EvalSettings& settings);

std::string eval_report_json(const EvalReport& report);
std::string pr_curve_csv(const std::vector<PrPoint>& curve);
std::string per_image_recall_csv(const std::vector<PerImageRecall>& recalls);

}  // namespace fishpipe
