// Release acceptance suite. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any check fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fishpipe/dedup.hpp"
#include "fishpipe/diagnostics.hpp"
#include "fishpipe/eval.hpp"
#include "fishpipe/hashing.hpp"
#include "fishpipe/image.hpp"
#include "fishpipe/reports.hpp"
#include "fishpipe/scene.hpp"
#include "fishpipe/split.hpp"
#include "fishpipe/yolo.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace fishpipe;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::printf("criterion %d: %s - %s%s%s\n", criterion, ok ? "PASS" : "FAIL",
                what.c_str(), detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++g_failures;
}

double round_to(double v, int decimals) {
    const double s = std::pow(10.0, decimals);
    return std::round(v * s) / s;
}

// ---------------------------------------------------------------------------
// 1. F1 consistency with the published operating points.

void criterion_1() {
    struct Row {
        double p, r, f1;
        int decimals;
    };
    const std::vector<Row> rows{
        {0.7837, 0.7356, 0.7589, 4}, {0.7255, 0.6102, 0.6629, 4},
        {0.7763, 0.6588, 0.7127, 4}, {0.8117, 0.6866, 0.7439, 4},
        {0.910, 0.867, 0.889, 3},    {0.907, 0.866, 0.886, 3},
        {0.912, 0.866, 0.888, 3},    {0.911, 0.858, 0.884, 3},
        {0.827, 0.715, 0.767, 3},    {0.804, 0.318, 0.456, 3},
        {0.891, 0.835, 0.862, 3},    {0.616, 0.552, 0.583, 3},
        {0.899, 0.850, 0.874, 3},    {0.752, 0.698, 0.724, 3},
    };
    const double tol = 0.001 + 1e-12;
    bool all_ok = true;
    std::string bad;
    for (const auto& row : rows) {
        // Synthesize counts whose ratios reproduce the published P and R.
        const double k = 2e8;
        const long tp = std::lround(row.p * row.r * k);
        const long fp = std::lround((1.0 - row.p) * row.r * k);
        const long fn = std::lround(row.p * (1.0 - row.r) * k);
        const Prf res = prf(tp, fp, fn);
        if (!res.precision || !res.recall) {
            all_ok = false;
            continue;
        }
        // Accept either the raw recomputation or its value rounded to the
        // published precision, both within 0.001 of the printed F1.
        const bool ok = std::abs(res.f1 - row.f1) <= tol ||
                        std::abs(round_to(res.f1, row.decimals) - row.f1) <= tol;
        if (!ok) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "P=%.4f R=%.4f -> %.5f vs %.4f ",
                          row.p, row.r, res.f1, row.f1);
            bad += buf;
            all_ok = false;
        }
    }
    report(1, "F1 recomputed from published precision/recall rows", all_ok, bad);
}

// ---------------------------------------------------------------------------
// 2. Edge throughput arithmetic against the published benchmark table.

bool within(double v, double target, double tol) {
    return std::abs(v - target) <= tol;
}

void criterion_2() {
    std::vector<LatencyLogEntry> log;
    log.push_back({"YOLO11n", "pytorch", {111.0}, false});
    log.push_back({"YOLO11n", "tensorrt", {88.0}, false});
    log.push_back({"YOLO11m", "pytorch", {450.0}, false});
    log.push_back({"YOLO11m", "torchscript", {}, true});
    log.push_back({"YOLO11m", "tensorrt", {290.0}, false});
    const EdgeReport rep = edge_report(log, 1000);

    bool ok = rep.rows.size() == 5;
    std::string detail;
    if (ok) {
        // FPS vs the printed column; the 111 ms row gets the wider band
        // because its printed FPS does not match its printed latency.
        ok &= within(rep.rows[0].fps, 8.99, 0.03);
        ok &= within(rep.rows[2].fps, 2.22, 0.02);
        ok &= within(rep.rows[4].fps, 3.45, 0.02);
        ok &= rep.rows[3].status == "failed";

        // Gains vs the printed +25% / +55%, compared at the table's
        // integer-percent precision with a 1 pp band.
        auto gain_ok = [](const EdgeBenchRow& row, double printed) {
            if (!row.gain) return false;
            const double pct = *row.gain * 100.0;
            return std::abs(pct - printed) <= 1.0 + 1e-12 ||
                   std::abs(std::round(pct) - printed) <= 1.0 + 1e-12;
        };
        ok &= gain_ok(rep.rows[1], 25.0);
        ok &= gain_ok(rep.rows[4], 55.0);
        ok &= !rep.rows[0].gain && !rep.rows[2].gain;

        const double minutes = minutes_for_frames(1000, 3.45);
        ok &= within(minutes, 4.8, 0.1);
        if (!ok) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "fps %.4f/%.4f/%.4f gains %.2f%%/%.2f%% minutes %.3f",
                          rep.rows[0].fps, rep.rows[2].fps, rep.rows[4].fps,
                          rep.rows[1].gain ? *rep.rows[1].gain * 100 : -1.0,
                          rep.rows[4].gain ? *rep.rows[4].gain * 100 : -1.0,
                          minutes);
            detail = buf;
        }
    }
    report(2, "edge report reproduces published FPS, gains and feasibility", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 3. Split protocol on a full-scale synthetic corpus.

std::vector<ImageRecord> synthetic_corpus() {
    // 8 sources, 28,765 records, 2,275 negatives (7.91%).
    const std::vector<int> positives{5295, 4505, 4005, 3505,
                                     3005, 2505, 2005, 1665};
    const std::vector<int> negatives{415, 355, 305, 285, 255, 225, 205, 230};
    std::vector<ImageRecord> records;
    records.reserve(28765);
    for (int s = 0; s < 8; ++s) {
        const std::string src = "source" + std::to_string(s);
        char buf[64];
        for (int i = 0; i < positives[s] + negatives[s]; ++i) {
            ImageRecord r;
            std::snprintf(buf, sizeof(buf), "%s/frame%05d.png", src.c_str(), i);
            r.image_id = buf;
            r.source = src;
            r.path = r.image_id;
            r.width_px = 640;
            r.height_px = 640;
            if (i < positives[s])
                r.annotations.push_back({0, {0.5, 0.5, 0.2, 0.2}});
            records.push_back(std::move(r));
        }
    }
    return records;
}

void criterion_3() {
    const auto records = synthetic_corpus();
    SplitPlan plan;
    plan.seed = 20240801;
    const auto first = two_step_split(records, plan);
    const auto second = two_step_split(records, plan);

    long n_train = 0, n_val = 0, n_test = 0;
    std::map<Split, std::pair<long, long>> neg_tally;  // split -> (neg, total)
    for (size_t i = 0; i < records.size(); ++i) {
        switch (first.assignment[i]) {
            case Split::kTrain: ++n_train; break;
            case Split::kVal: ++n_val; break;
            case Split::kTest: ++n_test; break;
            default: break;
        }
        auto& [neg, total] = neg_tally[first.assignment[i]];
        ++total;
        if (records[i].annotations.empty()) ++neg;
    }

    bool ok = std::abs(n_train - 20130) <= 5 && std::abs(n_val - 5752) <= 5 &&
              std::abs(n_test - 2883) <= 5;
    const double global_neg = 2275.0 / 28765.0;
    for (const auto& [split, t] : neg_tally) {
        const double frac = static_cast<double>(t.first) / t.second;
        ok &= std::abs(frac - global_neg) <= 0.005;
    }
    ok &= first.assignment == second.assignment;

    char buf[96];
    std::snprintf(buf, sizeof(buf), "train/val/test = %ld/%ld/%ld", n_train,
                  n_val, n_test);
    report(3, "stratified split sizes, class ratio and determinism", ok, buf);
}

// ---------------------------------------------------------------------------
// 4. Greedy matching vs exhaustive optimal one-to-one matching.

struct MatchSearch {
    const std::vector<Detection>* dets;
    const std::vector<NormalizedBox>* gts;
    double thr;
    int best = 0;
    long best_count = 0;

    void run() {
        std::vector<bool> used(gts->size(), false);
        best = 0;
        best_count = 0;
        recurse(0, 0, used);
    }
    void recurse(size_t di, int matched, std::vector<bool>& used) {
        if (di == dets->size()) {
            if (matched > best) {
                best = matched;
                best_count = 1;
            } else if (matched == best) {
                ++best_count;
            }
            return;
        }
        recurse(di + 1, matched, used);
        for (size_t gi = 0; gi < gts->size(); ++gi) {
            if (used[gi] || iou((*dets)[di].box, (*gts)[gi]) < thr) continue;
            used[gi] = true;
            recurse(di + 1, matched + 1, used);
            used[gi] = false;
        }
    }
};

void criterion_4() {
    std::mt19937_64 rng(1009);
    bool ok = true;
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<NormalizedBox> gts;
        std::vector<Detection> dets;
        const int ng = static_cast<int>(rng() % 6);
        const int nd = static_cast<int>(rng() % 6);
        for (int i = 0; i < ng; ++i) gts.push_back(testsupport::random_box(rng));
        for (int i = 0; i < nd; ++i) {
            NormalizedBox b = testsupport::random_box(rng);
            if (!gts.empty() && rng() % 2) {
                b = gts[rng() % gts.size()];
                b.cx += (static_cast<double>(rng() % 100) - 50) / 1000.0;
                b.cy += (static_cast<double>(rng() % 100) - 50) / 1000.0;
            }
            dets.push_back({b, static_cast<double>(rng() % 1000) / 999.0});
        }
        const MatchResult m = match_detections(dets, gts, 0.5);
        ok &= m.tp.size() + m.fn.size() == gts.size();
        ok &= m.tp.size() + m.fp.size() == dets.size();

        MatchSearch search{&dets, &gts, 0.5};
        search.run();
        if (search.best_count == 1) {
            ++compared;
            ok &= static_cast<int>(m.tp.size()) == search.best;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d unique-optimum instances compared",
                  compared);
    report(4, "greedy matching equals the exhaustive optimum", ok && compared > 0,
           buf);
}

// ---------------------------------------------------------------------------
// 5. AP against a definition-level recomputation.

double ap_oracle(const std::vector<ImageEvalInput>& inputs, double thr) {
    struct L {
        double conf;
        bool tp;
        size_t im;
        int di;
    };
    std::vector<L> all;
    size_t total_gt = 0;
    for (size_t im = 0; im < inputs.size(); ++im) {
        const auto& in = inputs[im];
        total_gt += in.ground_truths.size();
        const MatchResult m = match_detections(in.detections, in.ground_truths, thr);
        std::vector<bool> tp(in.detections.size(), false);
        for (auto [di, gi] : m.tp) tp[di] = true;
        for (size_t di = 0; di < in.detections.size(); ++di)
            all.push_back({in.detections[di].confidence, tp[di], im,
                           static_cast<int>(di)});
    }
    std::sort(all.begin(), all.end(), [](const L& a, const L& b) {
        if (a.conf != b.conf) return a.conf > b.conf;
        if (a.im != b.im) return a.im < b.im;
        return a.di < b.di;
    });
    double ap = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double r = k / 100.0;
        double best_p = 0.0;
        long tp = 0, fp = 0;
        for (const auto& d : all) {
            if (d.tp) ++tp; else ++fp;
            const double recall = static_cast<double>(tp) / total_gt;
            const double precision = static_cast<double>(tp) / (tp + fp);
            if (recall >= r) best_p = std::max(best_p, precision);
        }
        ap += best_p;
    }
    return ap / 101.0;
}

void criterion_5() {
    std::mt19937_64 rng(2003);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ImageEvalInput> inputs;
        bool any_gt = false;
        const int n_images = 1 + static_cast<int>(rng() % 4);
        for (int im = 0; im < n_images; ++im) {
            ImageEvalInput in;
            in.image_id = "img" + std::to_string(im);
            const int ng = static_cast<int>(rng() % 4);
            for (int i = 0; i < ng; ++i)
                in.ground_truths.push_back(testsupport::random_box(rng));
            any_gt |= ng > 0;
            const int nd = static_cast<int>(rng() % 5);
            for (int i = 0; i < nd; ++i) {
                NormalizedBox b = testsupport::random_box(rng);
                if (!in.ground_truths.empty() && rng() % 2) {
                    b = in.ground_truths[rng() % in.ground_truths.size()];
                    b.cx += (static_cast<double>(rng() % 100) - 50) / 2000.0;
                }
                in.detections.push_back(
                    {b, static_cast<double>(rng() % 1000) / 999.0});
            }
            inputs.push_back(std::move(in));
        }
        if (!any_gt) continue;
        const double got = pr_curve_and_ap(inputs, 0.5).ap;
        ok &= std::abs(got - ap_oracle(inputs, 0.5)) <= 1e-9;
    }

    // Exact-copy detections score AP 1.0 at every threshold, so both mAP
    // figures must be bit-identical.
    ImageEvalInput in;
    in.image_id = "exact";
    NormalizedBox gt{0.5, 0.5, 0.3, 0.3};
    in.ground_truths.push_back(gt);
    in.detections.push_back({gt, 0.9});
    auto [m50, m5095] = map_range({in});
    ok &= m50 == m5095;

    report(5, "AP agrees with the definition-level oracle", ok);
}

// ---------------------------------------------------------------------------
// 6. Visual-metric formulas: closed-form cases and double computation.

double oracle_turbidity(const Image& img) {
    double sum = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double m = img.r(x, y);
            if (img.g(x, y) < m) m = img.g(x, y);
            if (img.b(x, y) < m) m = img.b(x, y);
            sum += m;
        }
    return sum / (static_cast<double>(img.width()) * img.height());
}

double oracle_rms_contrast(const Image& img) {
    // E[x^2] - E[x]^2 formulation.
    double s = 0.0, s2 = 0.0;
    const double n = static_cast<double>(img.width()) * img.height();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double l = img.luma(x, y);
            s += l;
            s2 += l * l;
        }
    return std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)));
}

double oracle_blur(const Image& img) {
    const int w = img.width(), h = img.height();
    auto lum = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return img.luma(x, y);
    };
    std::vector<double> resp;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            resp.push_back(4 * lum(x, y) - lum(x - 1, y) - lum(x + 1, y) -
                           lum(x, y - 1) - lum(x, y + 1));
    double s = 0.0, s2 = 0.0;
    for (double v : resp) {
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(resp.size());
    return s2 / n - (s / n) * (s / n);
}

double oracle_uicm(const Image& img) {
    double srg = 0.0, srg2 = 0.0, syb = 0.0, syb2 = 0.0;
    const double n = static_cast<double>(img.width()) * img.height();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double rg = img.r(x, y) - img.g(x, y);
            const double yb = (img.r(x, y) + img.g(x, y)) / 2.0 - img.b(x, y);
            srg += rg;
            srg2 += rg * rg;
            syb += yb;
            syb2 += yb * yb;
        }
    const double mrg = srg / n, myb = syb / n;
    const double vrg = srg2 / n - mrg * mrg;
    const double vyb = syb2 / n - myb * myb;
    return -std::sqrt(mrg * mrg + myb * myb) -
           0.3 * std::sqrt(std::max(0.0, vrg) + std::max(0.0, vyb));
}

double oracle_uism(const Image& img) {
    const int w = img.width(), h = img.height();
    auto lum = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return img.luma(x, y);
    };
    double sum = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = lum(x + 1, y - 1) + 2 * lum(x + 1, y) +
                              lum(x + 1, y + 1) - lum(x - 1, y - 1) -
                              2 * lum(x - 1, y) - lum(x - 1, y + 1);
            const double gy = lum(x - 1, y + 1) + 2 * lum(x, y + 1) +
                              lum(x + 1, y + 1) - lum(x - 1, y - 1) -
                              2 * lum(x, y - 1) - lum(x + 1, y - 1);
            sum += std::hypot(gx, gy);
        }
    return sum / (static_cast<double>(w) * h);
}

double oracle_uiconm(const Image& img, int block) {
    const int bx = img.width() / block, by = img.height() / block;
    double sum = 0.0;
    for (int j = 0; j < by; ++j)
        for (int i = 0; i < bx; ++i) {
            double lo = 1e9, hi = -1e9;
            for (int y = j * block; y < (j + 1) * block; ++y)
                for (int x = i * block; x < (i + 1) * block; ++x) {
                    const double v = img.luma(x, y);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            if (hi + lo > 0.0) sum += (hi - lo) / (hi + lo);
        }
    return sum / (static_cast<double>(bx) * by);
}

double oracle_uciqe(const Image& img) {
    auto lin = [](double c) {
        return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    };
    auto f = [](double t) {
        return t > 216.0 / 24389.0 ? std::cbrt(t)
                                   : (24389.0 / 27.0 * t + 16.0) / 116.0;
    };
    std::vector<double> chroma, lum;
    double sat = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double r = img.r(x, y), g = img.g(x, y), b = img.b(x, y);
            const double rl = lin(r), gl = lin(g), bl = lin(b);
            const double X = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
            const double Y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
            const double Z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
            const double fx = f(X / 0.95047), fy = f(Y), fz = f(Z / 1.08883);
            const double a = 500.0 * (fx - fy), bb = 200.0 * (fy - fz);
            chroma.push_back(std::sqrt(a * a + bb * bb));
            const double hi = std::max({r, g, b});
            if (hi > 0.0) sat += (hi - std::min({r, g, b})) / hi;
            lum.push_back(img.luma(x, y));
        }
    double s = 0.0, s2 = 0.0;
    for (double c : chroma) {
        s += c;
        s2 += c * c;
    }
    const double n = static_cast<double>(chroma.size());
    const double sigma_c = std::sqrt(std::max(0.0, s2 / n - (s / n) * (s / n)));
    std::sort(lum.begin(), lum.end());
    auto pct = [&](double p) {
        const double rank = p / 100.0 * (lum.size() - 1);
        const size_t lo = static_cast<size_t>(std::floor(rank));
        const size_t hi = static_cast<size_t>(std::ceil(rank));
        return lum[lo] * (1.0 - (rank - lo)) + lum[hi] * (rank - lo);
    };
    return kUciqeAlpha * sigma_c + kUciqeBeta * (pct(99.0) - pct(1.0)) +
           kUciqeGamma * (sat / n);
}

void criterion_6() {
    bool ok = true;
    std::string detail;

    // Closed-form cases on constant images. A colour-neutral constant is
    // needed for the UIQM zero (the colourfulness term sees channel offsets).
    const Image flat = testsupport::constant_image(64, 64, 0.2, 0.5, 0.9);
    ok &= std::abs(turbidity(flat) - 0.2) <= 1e-12;
    ok &= std::abs(rms_contrast(flat)) <= 1e-12;
    ok &= std::abs(blur_variance(flat)) <= 1e-12;
    const Image gray = testsupport::constant_image(64, 64, 0.5, 0.5, 0.5);
    ok &= std::abs(uiqm(gray)) <= 1e-12;
    const ChannelRatios cr = channel_ratios(gray);
    ok &= std::abs(cr.r - 1.0 / 3.0) <= 1e-12 &&
          std::abs(cr.g - 1.0 / 3.0) <= 1e-12 &&
          std::abs(cr.b - 1.0 / 3.0) <= 1e-12;
    if (!ok) detail += "closed-form cases ";

    // Independent recomputation on random images.
    bool oracles_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const Image img = testsupport::random_image(96, 96, 4000 + trial);
        oracles_ok &= std::abs(turbidity(img) - oracle_turbidity(img)) <= 1e-6;
        oracles_ok &= std::abs(rms_contrast(img) - oracle_rms_contrast(img)) <= 1e-6;
        oracles_ok &= std::abs(blur_variance(img) - oracle_blur(img)) <= 1e-6;
        oracles_ok &= std::abs(uicm(img) - oracle_uicm(img)) <= 1e-6;
        oracles_ok &= std::abs(uism(img) - oracle_uism(img)) <= 1e-6;
        oracles_ok &= std::abs(uiconm(img) - oracle_uiconm(img, kUiconmBlock)) <= 1e-6;
        oracles_ok &= std::abs(uciqe(img) - oracle_uciqe(img)) <= 1e-6;
        // Composite identity with the published coefficients.
        const double combo = 0.0282 * uicm(img) + 0.2953 * uism(img) +
                             3.5753 * uiconm(img);
        oracles_ok &= std::abs(uiqm(img) - combo) <= 1e-9;
    }
    if (!oracles_ok) detail += "double-computation oracles ";
    ok &= oracles_ok;

    ok &= kUiqmC1 == 0.0282 && kUiqmC2 == 0.2953 && kUiqmC3 == 3.5753;
    ok &= kUciqeAlpha == 0.4680 && kUciqeBeta == 0.2745 && kUciqeGamma == 0.2576;

    report(6, "visual-metric formulas and coefficients", ok, detail);
}

// ---------------------------------------------------------------------------
// 7. Dedup guarantees on planted duplicates.

void criterion_7() {
    bool ok = md5_hex(std::string()) == "d41d8cd98f00b204e9800998ecf8427e";

    const Image base = testsupport::random_image(48, 48, 777);
    const uint64_t phash = average_hash(base);
    const std::string digest = md5_hex("fake image bytes");

    auto rec = [&](const std::string& id, const std::string& path,
                   const std::string& dig, uint64_t ph,
                   std::vector<Annotation> anns) {
        ImageRecord r;
        r.image_id = id;
        r.source = "s";
        r.path = path;
        r.width_px = 48;
        r.height_px = 48;
        r.content_digest = dig;
        r.perceptual_hash = ph;
        r.annotations = std::move(anns);
        return r;
    };
    std::vector<Annotation> anns{{0, {0.5, 0.5, 0.25, 0.25}}};

    // Planted exact duplicates always collapse.
    const auto exact = group_duplicates(
        {rec("s/a", "a.png", digest, phash, anns),
         rec("s/b", "b.png", digest, ~phash, anns)});
    ok &= exact.groups.size() == 1 && exact.survivors.size() == 1;

    // Identical image bytes with different labels never exact-group.
    std::vector<Annotation> other{{0, {0.4, 0.4, 0.25, 0.25}}};
    const auto mixed = group_duplicates(
        {rec("s/a", "a.png", digest, phash, anns),
         rec("s/b", "b.png", digest, ~phash, other)});
    ok &= mixed.groups.empty() && mixed.survivors.size() == 2;

    // Idempotence: the survivor set contains no further duplicates.
    const std::vector<ImageRecord> pile{
        rec("s/a", "a.png", digest, phash, anns),
        rec("s/b", "b.png", digest, phash, anns),
        rec("s/c", "c.png", md5_hex("x"), phash ^ 1, other),
        rec("s/d", "d.png", md5_hex("y"), ~phash, {})};
    const auto once = group_duplicates(pile);
    const auto twice = group_duplicates(once.survivors);
    ok &= twice.groups.empty() &&
          twice.survivors.size() == once.survivors.size();

    report(7, "dedup collapses planted duplicates and respects labels", ok);
}

// ---------------------------------------------------------------------------
// 8. End-to-end CLI determinism over a bundled toy corpus.

void write_text(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

void build_toy_corpus(const fs::path& root) {
    const std::vector<std::string> sources{"alpha", "beta", "gamma"};
    std::mt19937_64 box_rng(12021);
    for (size_t s = 0; s < sources.size(); ++s) {
        const fs::path images = root / sources[s] / "images";
        const fs::path labels = root / sources[s] / "labels";
        fs::create_directories(images);
        fs::create_directories(labels);
        for (int i = 0; i < 19; ++i) {
            char stem[32];
            std::snprintf(stem, sizeof(stem), "img%02d", i);
            cv::Mat3b mat(96, 96);
            std::mt19937_64 rng(9000 + s * 100 + i);
            for (int y = 0; y < mat.rows; ++y)
                for (int x = 0; x < mat.cols; ++x)
                    mat(y, x) = cv::Vec3b(rng() % 256, rng() % 256, rng() % 256);
            cv::imwrite((images / (std::string(stem) + ".png")).string(), mat);
            if (i >= 16) continue;  // last three are background-only
            std::vector<Annotation> anns;
            for (int k = 0; k <= i % 3; ++k)
                anns.push_back({0, testsupport::random_box(box_rng)});
            write_text(labels / (std::string(stem) + ".txt"),
                       serialize_yolo(anns));
        }
        // Planted duplicate: byte-identical image and label copy of img00.
        fs::copy_file(images / "img00.png", images / "img99.png");
        fs::copy_file(labels / "img00.txt", labels / "img99.txt");
    }
}

void build_predictions(const fs::path& corpus, const fs::path& preds) {
    fs::create_directories(preds);
    const std::vector<std::string> sources{"alpha", "beta", "gamma"};
    std::mt19937_64 rng(31337);
    for (const auto& src : sources) {
        for (const auto& e :
             fs::directory_iterator(corpus / src / "images")) {
            const std::string stem = e.path().stem().string();
            const fs::path label = corpus / src / "labels" / (stem + ".txt");
            std::string out;
            char buf[128];
            if (fs::exists(label)) {
                const auto parsed = parse_yolo_label_file(
                    read_file_text(label.string()), 96, 96);
                for (const auto& a : parsed.annotations) {
                    NormalizedBox b = a.box;
                    b.cx += (static_cast<double>(rng() % 21) - 10) / 1000.0;
                    b.cy += (static_cast<double>(rng() % 21) - 10) / 1000.0;
                    std::snprintf(buf, sizeof(buf),
                                  "%d %.6f %.6f %.6f %.6f %.4f\n", a.class_id,
                                  b.cx, b.cy, b.w, b.h,
                                  0.3 + (rng() % 70) / 100.0);
                    out += buf;
                }
            }
            if (rng() % 4 == 0) {  // occasional spurious detection
                std::snprintf(buf, sizeof(buf),
                              "0 %.6f %.6f %.6f %.6f %.4f\n",
                              0.1 + (rng() % 80) / 100.0,
                              0.1 + (rng() % 80) / 100.0, 0.08, 0.08,
                              0.3 + (rng() % 60) / 100.0);
                out += buf;
            }
            write_text(preds / (src + "_" + stem + ".txt"), out);
        }
    }
}

bool run_chain(const std::string& cli, const fs::path& cfg,
               const fs::path& preds, const fs::path& latency,
               const fs::path& out, const fs::path& log) {
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >> " + log.string() +
                                " 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string c = " --config " + cfg.string();
    const auto stage = [&](int i) { return (out / ("s" + std::to_string(i))).string(); };
    return run(c + " --out " + stage(1) + " --jobs 2 ingest") &&
           run(c + " --manifest " + stage(1) + "/manifest.json --out " +
               stage(2) + " dedup") &&
           run(c + " --manifest " + stage(2) + "/manifest.json --out " +
               stage(3) + " --seed 42 split") &&
           run(c + " --manifest " + stage(3) + "/manifest.json --out " +
               stage(4) + " --jobs 2 diagnose") &&
           run(c + " --manifest " + stage(4) + "/manifest.json --out " +
               stage(5) + " eval --predictions " + preds.string()) &&
           run(c + " --out " + stage(6) + " attribute --diagnostics " +
               stage(4) + "/diagnostics.csv --recall " + stage(5) +
               "/per_image_recall.csv") &&
           run("--out " + stage(7) + " edge-report --latency-log " +
               latency.string());
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
    std::set<fs::path> rel_a, rel_b;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel_a.insert(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) rel_b.insert(fs::relative(e.path(), b));
    if (rel_a != rel_b || rel_a.empty()) return false;
    for (const auto& rel : rel_a) {
        std::ifstream fa(a / rel, std::ios::binary);
        std::ifstream fb(b / rel, std::ios::binary);
        const std::string da((std::istreambuf_iterator<char>(fa)), {});
        const std::string db((std::istreambuf_iterator<char>(fb)), {});
        if (da != db) return false;
    }
    return true;
}

void criterion_8() {
    const fs::path work = fs::temp_directory_path() / "fishpipe_acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    const fs::path corpus = work / "corpus";
    const fs::path preds = work / "preds";
    build_toy_corpus(corpus);
    build_predictions(corpus, preds);

    std::string cfg = "{\n  \"registry\": [\n";
    for (const std::string src : {"alpha", "beta", "gamma"}) {
        cfg += "    {\"name\": \"" + src + "\", \"root\": \"" +
               (corpus / src).generic_string() + "\", \"adapter\": \"yolo\"}";
        cfg += src == "gamma" ? "\n" : ",\n";
    }
    cfg += "  ],\n  \"split\": {\"train\": 0.7, \"val\": 0.2, \"test\": 0.1, "
           "\"seed\": 42}\n}\n";
    write_text(work / "config.json", cfg);
    write_text(work / "latency.csv",
               "model,format,latency_ms\n"
               "YOLO11n,pytorch,111\nYOLO11n,tensorrt,88\n"
               "YOLO11m,pytorch,450\nYOLO11m,torchscript,OOM\n"
               "YOLO11m,tensorrt,290\n");

    const std::string cli = FISHPIPE_CLI_PATH;
    const bool ran_a = run_chain(cli, work / "config.json", preds,
                                 work / "latency.csv", work / "runA",
                                 work / "log.txt");
    const bool ran_b = run_chain(cli, work / "config.json", preds,
                                 work / "latency.csv", work / "runB",
                                 work / "log.txt");
    bool ok = ran_a && ran_b;
    std::string detail;
    if (!ok) {
        detail = "CLI chain failed, see " + (work / "log.txt").string();
    } else {
        ok = dirs_identical(work / "runA", work / "runB");
        if (!ok) detail = "outputs differ between runs under " + work.string();
    }
    report(8, "CLI chain is byte-identical across runs", ok, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) {
        std::printf("%d criterion check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
