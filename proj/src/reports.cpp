#include "fishpipe/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fishpipe/diagnostics.hpp"
#include "fishpipe/scene.hpp"

namespace fishpipe {

namespace {

struct Accumulator {
    int count = 0;
    double sum = 0.0;
    int recall_count = 0;
    void add(const std::optional<double>& recall) {
        ++count;
        if (recall) {
            sum += *recall;
            ++recall_count;
        }
    }
    StratifiedRecallRow row(const std::string& kind, const std::string& label) const {
        StratifiedRecallRow r;
        r.kind = kind;
        r.label = label;
        r.count = count;
        if (recall_count > 0) r.mean_recall = sum / recall_count;
        return r;
    }
};

// Quartile rows of a covariate over images with defined recall.
void quartile_rows(const std::vector<StratifiedInput>& inputs,
                   const std::string& kind,
                   double (*value)(const StratifiedInput&),
                   std::vector<StratifiedRecallRow>& out) {
    std::vector<double> vals;
    for (const auto& in : inputs)
        if (in.recall) vals.push_back(value(in));
    const std::vector<std::string> labels{"Q1", "Q2", "Q3", "Q4"};
    if (vals.empty()) {
        for (const auto& l : labels) out.push_back(Accumulator{}.row(kind, l));
        return;
    }
    const double q1 = percentile(vals, 25.0);
    const double q2 = percentile(vals, 50.0);
    const double q3 = percentile(vals, 75.0);
    std::vector<Accumulator> acc(4);
    for (const auto& in : inputs) {
        if (!in.recall) continue;
        const double v = value(in);
        const int bin = v <= q1 ? 0 : (v <= q2 ? 1 : (v <= q3 ? 2 : 3));
        acc[bin].add(in.recall);
    }
    for (int i = 0; i < 4; ++i) out.push_back(acc[i].row(kind, labels[i]));
}

}  // namespace

std::vector<StratifiedRecallRow> stratified_recall(
    const std::vector<StratifiedInput>& inputs) {
    std::vector<StratifiedRecallRow> out;
    std::map<std::string, Accumulator> density;
    for (const auto& label : density_bin_labels()) density[label];
    for (const auto& in : inputs) density[density_bin(in.fish_count)].add(in.recall);
    for (const auto& label : density_bin_labels())
        out.push_back(density[label].row("density", label));
    quartile_rows(inputs, "overlap",
                  [](const StratifiedInput& i) { return i.overlap; }, out);
    quartile_rows(inputs, "turbidity",
                  [](const StratifiedInput& i) { return i.turbidity; }, out);
    quartile_rows(inputs, "blur",
                  [](const StratifiedInput& i) { return i.blur_var; }, out);
    return out;
}

std::string stratified_recall_csv(const std::vector<StratifiedRecallRow>& rows) {
    std::string csv = "kind,stratum,count,mean_recall\n";
    char buf[64];
    for (const auto& r : rows) {
        csv += r.kind + "," + r.label + "," + std::to_string(r.count) + ",";
        if (r.mean_recall) {
            std::snprintf(buf, sizeof(buf), "%.9g", *r.mean_recall);
            csv += buf;
        } else {
            csv += "undefined";
        }
        csv += "\n";
    }
    return csv;
}

NormalizedMetricTable min_max_normalize(const MetricTableInput& input,
                                        const std::vector<double>& weights) {
    if (input.rows.empty()) throw std::invalid_argument("no sources to normalize");
    const size_t ncols = input.metric_names.size();
    for (const auto& [src, vals] : input.rows)
        if (vals.size() != ncols)
            throw std::invalid_argument("row width mismatch for source " + src);

    NormalizedMetricTable out;
    out.metric_names = input.metric_names;
    out.degenerate.assign(ncols, false);
    out.weights = weights.empty() ? std::vector<double>(ncols, 1.0) : weights;
    if (out.weights.size() != ncols)
        throw std::invalid_argument("weight count mismatch");

    for (size_t c = 0; c < ncols; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& [src, vals] : input.rows) {
            lo = std::min(lo, vals[c]);
            hi = std::max(hi, vals[c]);
        }
        const bool constant = !(hi > lo);
        out.degenerate[c] = constant;
        for (const auto& [src, vals] : input.rows) {
            auto& row = out.rows[src];
            row.resize(ncols);
            row[c] = constant ? 0.0 : (vals[c] - lo) / (hi - lo);
        }
    }
    for (const auto& [src, row] : out.rows)
        out.difficulty[src] = difficulty_index(row, out.weights);
    return out;
}

double difficulty_index(const std::vector<double>& normalized_row,
                        const std::vector<double>& weights) {
    if (normalized_row.empty()) throw std::invalid_argument("empty row");
    std::vector<double> w =
        weights.empty() ? std::vector<double>(normalized_row.size(), 1.0) : weights;
    if (w.size() != normalized_row.size())
        throw std::invalid_argument("weight count mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < normalized_row.size(); ++i) {
        num += w[i] * normalized_row[i];
        den += w[i];
    }
    if (den <= 0.0) throw std::invalid_argument("weights sum to zero");
    return num / den;
}

std::string normalized_table_csv(const NormalizedMetricTable& table) {
    std::ostringstream head;
    head << "# difficulty = weighted mean of normalized columns, weights:";
    for (size_t i = 0; i < table.metric_names.size(); ++i)
        head << " " << table.metric_names[i] << "=" << table.weights[i];
    head << "\n";
    std::string csv = head.str() + "source";
    for (size_t i = 0; i < table.metric_names.size(); ++i) {
        csv += "," + table.metric_names[i];
        if (table.degenerate[i]) csv += "(degenerate)";
    }
    csv += ",Difficulty\n";
    char buf[64];
    for (const auto& [src, row] : table.rows) {
        csv += src;
        for (double v : row) {
            std::snprintf(buf, sizeof(buf), ",%.9g", v);
            csv += buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.9g\n", table.difficulty.at(src));
        csv += buf;
    }
    return csv;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + j) / 2.0 + 1.0;  // tie average
        for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    return rank;
}

std::optional<double> pearson_of(const std::vector<double>& x,
                                 const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

Correlation correlate(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("series length mismatch");
    if (x.size() < 3) throw std::invalid_argument("series too short (< 3)");
    Correlation c;
    c.pearson = pearson_of(x, y);
    c.spearman = pearson_of(ranks(x), ranks(y));
    return c;
}

double minutes_for_frames(long frames, double fps) {
    if (fps <= 0.0) throw std::invalid_argument("fps must be positive");
    return frames / fps / 60.0;
}

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

EdgeReport edge_report(const std::vector<LatencyLogEntry>& log,
                       long feasibility_frames) {
    EdgeReport report;
    // model -> fps of its first listed format, or nullopt if that run failed.
    std::map<std::string, std::optional<double>> baseline_fps;
    char buf[160];
    for (const auto& e : log) {
        EdgeBenchRow row;
        row.model = e.model;
        row.format = e.format;
        if (e.failed || e.latencies_ms.empty()) {
            row.status = "failed";
            baseline_fps.try_emplace(e.model, std::nullopt);
            report.rows.push_back(std::move(row));
            continue;
        }
        row.status = "ok";
        row.mean_latency_ms =
            std::accumulate(e.latencies_ms.begin(), e.latencies_ms.end(), 0.0) /
            e.latencies_ms.size();
        std::vector<double> sorted = e.latencies_ms;
        std::sort(sorted.begin(), sorted.end());
        const size_t n = sorted.size();
        row.median_latency_ms =
            n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
        row.fps = 1000.0 / row.mean_latency_ms;

        auto [it, inserted] = baseline_fps.try_emplace(e.model, row.fps);
        if (!inserted) {
            if (it->second) {
                // Gain from printed (2 d.p.) throughputs, matching the table.
                const double base = round2(*it->second);
                row.gain = (round2(row.fps) - base) / base;
            } else {
                report.flags.push_back("no usable baseline for " + e.model + "/" +
                                       e.format);
            }
        }
        std::snprintf(buf, sizeof(buf),
                      "%s/%s: %ld frames at %.2f FPS -> %.2f minutes",
                      e.model.c_str(), e.format.c_str(), feasibility_frames,
                      row.fps, minutes_for_frames(feasibility_frames, row.fps));
        report.feasibility.push_back(buf);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<LatencyLogEntry> parse_latency_log_csv(const std::string& text) {
    std::vector<LatencyLogEntry> out;
    std::map<std::pair<std::string, std::string>, size_t> index;
    std::istringstream stream(text);
    std::string line;
    bool first = true;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (first && line.rfind("model,", 0) == 0) {  // header
            first = false;
            continue;
        }
        first = false;
        std::istringstream fields(line);
        std::string model, format, latency;
        if (!std::getline(fields, model, ',') ||
            !std::getline(fields, format, ',') ||
            !std::getline(fields, latency, ','))
            throw std::runtime_error("latency log: expected model,format,latency_ms");
        auto key = std::make_pair(model, format);
        auto [it, inserted] = index.try_emplace(key, out.size());
        if (inserted) out.push_back({model, format, {}, false});
        LatencyLogEntry& entry = out[it->second];
        char* end = nullptr;
        const double v = std::strtod(latency.c_str(), &end);
        if (end == latency.c_str() || *end != '\0') {
            entry.failed = true;  // e.g. "OOM"
        } else {
            entry.latencies_ms.push_back(v);
        }
    }
    return out;
}

std::string edge_report_csv(const EdgeReport& report) {
    std::string csv =
        "model,format,status,mean_latency_ms,median_latency_ms,fps,gain\n";
    char buf[160];
    for (const auto& r : report.rows) {
        if (r.status == "ok") {
            std::snprintf(buf, sizeof(buf), "%s,%s,ok,%.9g,%.9g,%.9g,",
                          r.model.c_str(), r.format.c_str(), r.mean_latency_ms,
                          r.median_latency_ms, r.fps);
            csv += buf;
            if (r.gain) {
                std::snprintf(buf, sizeof(buf), "%+.1f%%", *r.gain * 100.0);
                csv += buf;
            }
            csv += "\n";
        } else {
            csv += r.model + "," + r.format + ",failed,,,,\n";
        }
    }
    for (const auto& f : report.feasibility) csv += "# " + f + "\n";
    for (const auto& f : report.flags) csv += "# flag: " + f + "\n";
    return csv;
}

}  // namespace fishpipe
