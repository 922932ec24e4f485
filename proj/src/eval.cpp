#include "fishpipe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace fishpipe {

namespace {

std::vector<int> confidence_order(const std::vector<Detection>& dets,
                                  const std::vector<NormalizedBox>& gts) {
    std::vector<double> best_iou(dets.size(), 0.0);
    for (size_t i = 0; i < dets.size(); ++i)
        for (const auto& g : gts)
            best_iou[i] = std::max(best_iou[i], iou(dets[i].box, g));
    std::vector<int> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (dets[a].confidence != dets[b].confidence)
            return dets[a].confidence > dets[b].confidence;
        return best_iou[a] > best_iou[b];
    });
    return order;
}

}  // namespace

MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<NormalizedBox>& ground_truths,
                             double iou_threshold) {
    if (iou_threshold <= 0.0 || iou_threshold >= 1.0)
        throw std::invalid_argument("iou_threshold must be in (0,1)");
    MatchResult result;
    std::vector<bool> gt_taken(ground_truths.size(), false);
    for (int di : confidence_order(detections, ground_truths)) {
        int best_gt = -1;
        double best = 0.0;
        for (size_t gi = 0; gi < ground_truths.size(); ++gi) {
            if (gt_taken[gi]) continue;
            const double v = iou(detections[di].box, ground_truths[gi]);
            if (v >= iou_threshold && v > best) {
                best = v;
                best_gt = static_cast<int>(gi);
            }
        }
        if (best_gt >= 0) {
            gt_taken[best_gt] = true;
            result.tp.emplace_back(di, best_gt);
        } else {
            result.fp.push_back(di);
        }
    }
    for (size_t gi = 0; gi < ground_truths.size(); ++gi)
        if (!gt_taken[gi]) result.fn.push_back(static_cast<int>(gi));
    return result;
}

ApResult pr_curve_and_ap(const std::vector<ImageEvalInput>& inputs,
                         double iou_threshold) {
    size_t total_gt = 0;
    for (const auto& in : inputs) total_gt += in.ground_truths.size();
    if (total_gt == 0)
        throw std::domain_error("AP undefined: zero ground truths");

    // Per-image matching labels every detection TP or FP, then a single
    // global sweep in confidence order builds the cumulative curve.
    struct Labeled {
        double confidence;
        bool is_tp;
        size_t image;
        int det_index;
    };
    std::vector<Labeled> all;
    for (size_t im = 0; im < inputs.size(); ++im) {
        const auto& in = inputs[im];
        const MatchResult m =
            match_detections(in.detections, in.ground_truths, iou_threshold);
        std::vector<bool> is_tp(in.detections.size(), false);
        for (const auto& [di, gi] : m.tp) is_tp[di] = true;
        for (size_t di = 0; di < in.detections.size(); ++di)
            all.push_back({in.detections[di].confidence, is_tp[di], im,
                           static_cast<int>(di)});
    }
    std::sort(all.begin(), all.end(), [](const Labeled& a, const Labeled& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.image != b.image) return a.image < b.image;
        return a.det_index < b.det_index;
    });

    ApResult result;
    long tp = 0, fp = 0;
    for (const auto& d : all) {
        if (d.is_tp) ++tp; else ++fp;
        PrPoint p;
        p.confidence = d.confidence;
        p.precision = static_cast<double>(tp) / (tp + fp);
        p.recall = static_cast<double>(tp) / total_gt;
        result.curve.push_back(p);
    }

    // 101-point interpolation: precision at each grid recall is the max
    // precision among curve points with recall >= grid value.
    std::vector<double> env(result.curve.size());
    double running = 0.0;
    for (size_t i = result.curve.size(); i-- > 0;) {
        running = std::max(running, result.curve[i].precision);
        env[i] = running;
    }
    std::vector<double> recalls(result.curve.size());
    for (size_t i = 0; i < result.curve.size(); ++i)
        recalls[i] = result.curve[i].recall;

    double ap_sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double r = k / 100.0;
        const auto it = std::lower_bound(recalls.begin(), recalls.end(), r);
        if (it != recalls.end())
            ap_sum += env[static_cast<size_t>(it - recalls.begin())];
    }
    result.ap = ap_sum / 101.0;
    return result;
}

std::pair<double, double> map_range(const std::vector<ImageEvalInput>& inputs) {
    double map50 = 0.0;
    double sum = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double thr = 0.50 + 0.05 * k;
        const double ap = pr_curve_and_ap(inputs, thr).ap;
        if (k == 0) map50 = ap;
        sum += ap;
    }
    return {map50, sum / 10.0};
}

Prf prf(long tp, long fp, long fn) {
    Prf out;
    out.tp = tp;
    out.fp = fp;
    out.fn = fn;
    if (tp + fp > 0) out.precision = static_cast<double>(tp) / (tp + fp);
    if (tp + fn > 0) out.recall = static_cast<double>(tp) / (tp + fn);
    if (out.precision && out.recall && (*out.precision + *out.recall) > 0.0)
        out.f1 = 2.0 * (*out.precision) * (*out.recall) /
                 (*out.precision + *out.recall);
    return out;
}

namespace {

std::vector<Detection> above_cutoff(const std::vector<Detection>& dets,
                                    double conf_cutoff) {
    std::vector<Detection> out;
    for (const auto& d : dets)
        if (d.confidence >= conf_cutoff) out.push_back(d);
    return out;
}

}  // namespace

std::vector<PerImageRecall> per_image_recall(
    const std::vector<ImageEvalInput>& inputs, double conf_cutoff) {
    std::vector<PerImageRecall> out;
    for (const auto& in : inputs) {
        if (in.ground_truths.empty()) continue;
        const MatchResult m = match_detections(
            above_cutoff(in.detections, conf_cutoff), in.ground_truths, 0.5);
        PerImageRecall r;
        r.image_id = in.image_id;
        r.gt_count = static_cast<int>(in.ground_truths.size());
        r.tp_count = static_cast<int>(m.tp.size());
        r.recall = static_cast<double>(r.tp_count) / r.gt_count;
        out.push_back(std::move(r));
    }
    return out;
}

EvalReport evaluate_corpus(const std::vector<ImageEvalInput>& inputs,
                           const EvalSettings& settings) {
    EvalReport report;
    report.settings = settings;
    auto [m50, m5095] = map_range(inputs);
    report.map50 = m50;
    report.map50_95 = m5095;
    report.curve50 = pr_curve_and_ap(inputs, 0.5).curve;

    long tp = 0, fp = 0, fn = 0;
    for (const auto& in : inputs) {
        const MatchResult m =
            match_detections(above_cutoff(in.detections, settings.conf_cutoff),
                             in.ground_truths, settings.iou_threshold);
        tp += static_cast<long>(m.tp.size());
        fp += static_cast<long>(m.fp.size());
        fn += static_cast<long>(m.fn.size());
    }
    report.operating_point = prf(tp, fp, fn);
    report.image_recalls = per_image_recall(inputs, settings.conf_cutoff);
    return report;
}

std::string eval_report_json(const EvalReport& report) {
    nlohmann::json j;
    j["settings"] = {{"iou_threshold", report.settings.iou_threshold},
                     {"conf_cutoff", report.settings.conf_cutoff}};
    j["map50"] = report.map50;
    j["map50_95"] = report.map50_95;
    const auto& op = report.operating_point;
    nlohmann::json jop{{"tp", op.tp}, {"fp", op.fp}, {"fn", op.fn}, {"f1", op.f1}};
    jop["precision"] = op.precision ? nlohmann::json(*op.precision)
                                    : nlohmann::json();
    jop["recall"] = op.recall ? nlohmann::json(*op.recall) : nlohmann::json();
    j["operating_point"] = std::move(jop);
    j["evaluated_images"] = report.image_recalls.size();
    return j.dump(2) + "\n";
}

std::string pr_curve_csv(const std::vector<PrPoint>& curve) {
    std::string csv = "confidence,precision,recall\n";
    char buf[128];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.confidence,
                      p.precision, p.recall);
        csv += buf;
    }
    return csv;
}

std::string per_image_recall_csv(const std::vector<PerImageRecall>& recalls) {
    std::string csv = "image_id,gt_count,tp_count,recall\n";
    char buf[64];
    for (const auto& r : recalls) {
        std::snprintf(buf, sizeof(buf), ",%d,%d,%.9g\n", r.gt_count, r.tp_count,
                      r.recall);
        csv += r.image_id + buf;
    }
    return csv;
}

}  // namespace fishpipe
