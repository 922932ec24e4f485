#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fishpipe/adapters.hpp"
#include "fishpipe/dedup.hpp"
#include "fishpipe/diagnostics.hpp"
#include "fishpipe/eval.hpp"
#include "fishpipe/hashing.hpp"
#include "fishpipe/image.hpp"
#include "fishpipe/manifest.hpp"
#include "fishpipe/reports.hpp"
#include "fishpipe/scene.hpp"
#include "fishpipe/split.hpp"
#include "fishpipe/yolo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fishpipe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitValidation = 2;

struct PipelineConfig {
    std::vector<SourceDescriptor> registry;
    SplitPlan split;
    int phash_threshold = kDefaultPerceptualThreshold;
    EvalSettings eval;
    std::string output_dir = "out";
};

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    json j = json::parse(read_file_text(path));
    if (j.contains("registry"))
        for (const auto& s : j["registry"]) {
            SourceDescriptor d;
            d.name = s.at("name").get<std::string>();
            d.root = s.at("root").get<std::string>();
            d.adapter = s.value("adapter", std::string("yolo"));
            if (!adapter_known(d.adapter))
                throw std::runtime_error("unknown adapter '" + d.adapter +
                                         "' for source " + d.name);
            cfg.registry.push_back(std::move(d));
        }
    if (j.contains("split")) {
        const auto& s = j["split"];
        cfg.split.train_ratio = s.value("train", 0.70);
        cfg.split.val_ratio = s.value("val", 0.20);
        cfg.split.test_ratio = s.value("test", 0.10);
        cfg.split.seed = s.value("seed", uint64_t{0});
    }
    if (j.contains("dedup"))
        cfg.phash_threshold = j["dedup"].value("phash_threshold",
                                               kDefaultPerceptualThreshold);
    if (j.contains("eval")) {
        cfg.eval.iou_threshold = j["eval"].value("iou_threshold", 0.5);
        cfg.eval.conf_cutoff = j["eval"].value("conf_cutoff", kDefaultConfCutoff);
    }
    cfg.output_dir = j.value("output_dir", std::string("out"));
    return cfg;
}

// Report header echoing the effective settings, for auditability.
std::string settings_header(const PipelineConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "# split %.2f/%.2f/%.2f seed %llu; phash_threshold %d; "
                  "iou %.2f; conf %.2f\n",
                  cfg.split.train_ratio, cfg.split.val_ratio,
                  cfg.split.test_ratio,
                  static_cast<unsigned long long>(cfg.split.seed),
                  cfg.phash_threshold, cfg.eval.iou_threshold,
                  cfg.eval.conf_cutoff);
    return buf;
}

void run_parallel(size_t count, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min<size_t>(jobs, count);
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& th : pool) th.join();
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

int cmd_ingest(const PipelineConfig& cfg, const std::string& out_dir, int jobs) {
    if (cfg.registry.empty()) {
        std::cerr << "ingest: config has no sources\n";
        return kExitFatal;
    }
    Manifest manifest;
    manifest.registry = cfg.registry;
    manifest.split_seed = cfg.split.seed;
    bool any_violation = false;

    for (const auto& src : cfg.registry) {
        const fs::path images = fs::path(src.root) / "images";
        if (!fs::is_directory(images)) {
            std::cerr << "ingest: missing images directory: " << images << "\n";
            return kExitFatal;
        }
        std::vector<std::string> rel_paths;
        for (const auto& e : fs::recursive_directory_iterator(images))
            if (e.is_regular_file() && is_image_file(e.path()))
                rel_paths.push_back(
                    fs::relative(e.path(), images).generic_string());
        std::sort(rel_paths.begin(), rel_paths.end());

        std::vector<std::optional<ImageRecord>> partial(rel_paths.size());
        std::mutex log_mutex;
        run_parallel(rel_paths.size(), jobs, [&](size_t i) {
            const std::string& rel = rel_paths[i];
            const fs::path full = images / rel;
            try {
                const auto bytes = read_file_bytes(full.string());
                const Image img = decode_image(bytes);
                ImageRecord rec;
                rec.image_id = src.name + "/" + rel;
                rec.source = src.name;
                rec.path = full.generic_string();
                rec.width_px = img.width();
                rec.height_px = img.height();
                rec.content_digest = md5_hex(bytes);
                rec.perceptual_hash = average_hash(img);
                AdapterResult ann = run_adapter(src.adapter, src.root, rel,
                                                img.width(), img.height());
                rec.annotations = std::move(ann.annotations);
                std::lock_guard<std::mutex> lock(log_mutex);
                for (const auto& d : ann.dropped)
                    std::cerr << "ingest: " << rec.image_id << " line "
                              << d.line_number << ": " << d.message << "\n";
                partial[i] = std::move(rec);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "ingest: skipping " << full << ": " << e.what() << "\n";
            }
        });
        for (auto& rec : partial) {
            if (!rec) continue;
            const auto violations = validate_record(*rec);
            for (const auto& v : violations) {
                std::cerr << "validate: " << rec->image_id << ": " << v << "\n";
                any_violation = true;
            }
            manifest.records.push_back(std::move(*rec));
        }
    }
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "manifest.json").string(),
                    save_manifest(manifest));
    std::cout << "ingest: " << manifest.records.size() << " records from "
              << cfg.registry.size() << " sources\n";
    return any_violation ? kExitValidation : kExitOk;
}

int cmd_dedup(const PipelineConfig& cfg, const std::string& manifest_path,
              const std::string& out_dir) {
    Manifest m = load_manifest(read_file_text(manifest_path));
    DedupResult result = group_duplicates(m.records, cfg.phash_threshold);
    m.records = std::move(result.survivors);
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "manifest.json").string(),
                    save_manifest(m));
    write_file_text((fs::path(out_dir) / "dedup_report.csv").string(),
                    settings_header(cfg) +
                        dedup_report_csv(result, cfg.phash_threshold));
    std::cout << "dedup: " << result.groups.size() << " groups, removed "
              << result.removed.size() << ", " << m.records.size()
              << " survivors\n";
    return kExitOk;
}

int cmd_split(PipelineConfig cfg, const std::string& manifest_path,
              const std::string& out_dir, std::optional<uint64_t> seed) {
    Manifest m = load_manifest(read_file_text(manifest_path));
    if (seed) cfg.split.seed = *seed;
    cfg.split.seed = seed ? *seed : (cfg.split.seed ? cfg.split.seed : m.split_seed);
    SplitAssignment sa = two_step_split(m.records, cfg.split);
    for (size_t i = 0; i < m.records.size(); ++i)
        m.records[i].split = sa.assignment[i];
    m.split_seed = cfg.split.seed;
    for (const auto& w : sa.warnings) std::cerr << "split: " << w << "\n";
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "manifest.json").string(),
                    save_manifest(m));
    write_file_text((fs::path(out_dir) / "split_summary.csv").string(),
                    settings_header(cfg) +
                        split_summary_csv(m.records, sa.assignment));
    return kExitOk;
}

std::string diagnostics_csv_header() {
    return "image_id,source,split,turbidity,rms_contrast,blur_var,ratio_r,"
           "ratio_g,ratio_b,uicm,uism,uiconm,uiqm,uciqe,fish_count,"
           "overlap_pairwise,overlap_maxmean,density_bin\n";
}

std::string diagnostics_csv_row(const ImageRecord& r) {
    const DiagnosticVector& d = *r.diagnostics;
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  ",%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                  "%d,%.9g,%.9g,",
                  d.turbidity, d.rms_contrast, d.blur_var, d.ratio_r, d.ratio_g,
                  d.ratio_b, d.uicm, d.uism, d.uiconm, d.uiqm, d.uciqe,
                  d.fish_count, d.overlap_pairwise, d.overlap_maxmean);
    return r.image_id + "," + r.source + "," + to_string(r.split) + buf +
           density_bin(d.fish_count) + "\n";
}

int cmd_diagnose(const PipelineConfig& cfg, const std::string& manifest_path,
                 const std::string& out_dir, int jobs) {
    Manifest m = load_manifest(read_file_text(manifest_path));
    std::mutex log_mutex;
    run_parallel(m.records.size(), jobs, [&](size_t i) {
        ImageRecord& rec = m.records[i];
        try {
            const Image img = load_image(rec.path);
            rec.diagnostics = compute_diagnostics(img, rec.annotations);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(log_mutex);
            std::cerr << "diagnose: " << rec.image_id << ": " << e.what() << "\n";
        }
    });
    std::string csv = settings_header(cfg) + diagnostics_csv_header();
    for (const auto& rec : m.records)
        if (rec.diagnostics) csv += diagnostics_csv_row(rec);
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "manifest.json").string(),
                    save_manifest(m));
    write_file_text((fs::path(out_dir) / "diagnostics.csv").string(), csv);
    return kExitOk;
}

int cmd_eval(const PipelineConfig& cfg, const std::string& manifest_path,
             const std::string& predictions_dir, const std::string& out_dir) {
    Manifest m = load_manifest(read_file_text(manifest_path));
    std::vector<ImageEvalInput> inputs;
    for (const auto& rec : m.records) {
        if (rec.split != Split::kTest && rec.split != Split::kUnassigned) continue;
        ImageEvalInput in;
        in.image_id = rec.image_id;
        for (const auto& a : rec.annotations) in.ground_truths.push_back(a.box);
        // Prediction file mirrors the image_id with slashes flattened.
        std::string flat = rec.image_id;
        std::replace(flat.begin(), flat.end(), '/', '_');
        const fs::path pred =
            fs::path(predictions_dir) /
            (fs::path(flat).replace_extension().string() + ".txt");
        if (fs::exists(pred)) {
            PredictionParseResult parsed =
                parse_yolo_predictions(read_file_text(pred.string()));
            for (const auto& d : parsed.malformed)
                std::cerr << "eval: " << pred << " line " << d.line_number << ": "
                          << d.message << "\n";
            in.detections = std::move(parsed.detections);
        }
        inputs.push_back(std::move(in));
    }
    EvalReport report = evaluate_corpus(inputs, cfg.eval);
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "eval_report.json").string(),
                    eval_report_json(report));
    write_file_text((fs::path(out_dir) / "pr_curve.csv").string(),
                    pr_curve_csv(report.curve50));
    write_file_text((fs::path(out_dir) / "per_image_recall.csv").string(),
                    per_image_recall_csv(report.image_recalls));
    return kExitOk;
}

std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
    std::vector<std::map<std::string, std::string>> rows;
    std::istringstream stream(text);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream fs_(line);
        std::string f;
        while (std::getline(fs_, f, ',')) fields.push_back(f);
        if (header.empty()) {
            header = fields;
            continue;
        }
        std::map<std::string, std::string> row;
        for (size_t i = 0; i < header.size() && i < fields.size(); ++i)
            row[header[i]] = fields[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_attribute(const PipelineConfig& cfg, const std::string& diagnostics_path,
                  const std::string& recall_path, const std::string& out_dir) {
    const auto diag_rows = parse_csv(read_file_text(diagnostics_path));
    const auto recall_rows = parse_csv(read_file_text(recall_path));
    std::map<std::string, double> recall_by_id;
    for (const auto& r : recall_rows)
        recall_by_id[r.at("image_id")] = std::stod(r.at("recall"));

    std::vector<StratifiedInput> inputs;
    const std::vector<std::string> metric_cols{
        "turbidity", "rms_contrast", "blur_var", "ratio_b", "ratio_g",
        "ratio_r", "uiqm", "uciqe", "fish_count", "overlap_maxmean"};
    std::map<std::string, std::vector<std::vector<double>>> by_source;
    std::map<std::string, std::vector<double>> covariate_series;
    std::vector<double> recall_series;

    for (const auto& row : diag_rows) {
        StratifiedInput in;
        in.image_id = row.at("image_id");
        in.fish_count = std::stoi(row.at("fish_count"));
        in.overlap = std::stod(row.at("overlap_maxmean"));
        in.turbidity = std::stod(row.at("turbidity"));
        in.blur_var = std::stod(row.at("blur_var"));
        const auto it = recall_by_id.find(in.image_id);
        if (it != recall_by_id.end()) in.recall = it->second;
        inputs.push_back(in);

        std::vector<double> metrics;
        for (const auto& c : metric_cols) metrics.push_back(std::stod(row.at(c)));
        by_source[row.at("source")].push_back(metrics);
        if (in.recall) {
            recall_series.push_back(*in.recall);
            for (size_t c = 0; c < metric_cols.size(); ++c)
                covariate_series[metric_cols[c]].push_back(metrics[c]);
        }
    }
    if (inputs.empty()) {
        std::cerr << "attribute: no diagnostics rows\n";
        return kExitFatal;
    }

    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "stratified_recall.csv").string(),
                    settings_header(cfg) +
                        stratified_recall_csv(stratified_recall(inputs)));

    MetricTableInput table;
    table.metric_names = {"Turbidity", "Contrast", "BlurVar", "Blue", "Green",
                          "Red", "UIQM", "UCIQE", "FishCount", "Overlap"};
    for (const auto& [src, rows] : by_source) {
        std::vector<double> means(metric_cols.size(), 0.0);
        for (const auto& r : rows)
            for (size_t c = 0; c < means.size(); ++c) means[c] += r[c];
        for (auto& v : means) v /= rows.size();
        table.rows[src] = means;
    }
    write_file_text((fs::path(out_dir) / "normalized_metrics.csv").string(),
                    normalized_table_csv(min_max_normalize(table)));

    // Per-image correlations between each covariate and recall; long format.
    std::string corr = "covariate,granularity,n,pearson,spearman\n";
    char buf[160];
    for (const auto& c : metric_cols) {
        const auto& series = covariate_series[c];
        if (series.size() < 3) continue;
        const Correlation r = correlate(series, recall_series);
        std::snprintf(buf, sizeof(buf), "%s,per_image,%zu,", c.c_str(),
                      series.size());
        corr += buf;
        corr += r.pearson ? std::to_string(*r.pearson) : "undefined";
        corr += ",";
        corr += r.spearman ? std::to_string(*r.spearman) : "undefined";
        corr += "\n";
    }
    write_file_text((fs::path(out_dir) / "correlations.csv").string(),
                    settings_header(cfg) + corr);

    json summary{{"images", inputs.size()},
                 {"images_with_recall", recall_series.size()},
                 {"sources", by_source.size()}};
    write_file_text((fs::path(out_dir) / "attribution_summary.json").string(),
                    summary.dump(2) + "\n");
    return kExitOk;
}

int cmd_edge_report(const std::string& log_path, const std::string& out_dir,
                    long frames) {
    const auto log = parse_latency_log_csv(read_file_text(log_path));
    if (log.empty()) {
        std::cerr << "edge-report: empty latency log\n";
        return kExitFatal;
    }
    const EdgeReport report = edge_report(log, frames);
    fs::create_directories(out_dir);
    write_file_text((fs::path(out_dir) / "edge_report.csv").string(),
                    edge_report_csv(report));
    for (const auto& line : report.feasibility) std::cout << line << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus-reliability pipeline for underwater detection datasets"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, out_dir = "out";
    std::string predictions_dir, diagnostics_path, recall_path, latency_path;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    std::optional<uint64_t> seed;
    std::optional<int> phash_thresh;
    std::optional<double> iou_thresh, conf_thresh;
    long frames = 1000;

    app.add_option("--config", config_path, "pipeline config JSON");
    app.add_option("--manifest", manifest_path, "input manifest JSON");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker pool size");
    app.add_option("--seed", seed, "split seed override");
    app.add_option("--iou-thresh", iou_thresh, "matching IoU threshold");
    app.add_option("--conf-thresh", conf_thresh, "operating-point confidence cutoff");
    app.add_option("--phash-thresh", phash_thresh, "perceptual hamming threshold");

    auto* ingest = app.add_subcommand("ingest", "scan sources into a manifest");
    auto* dedup = app.add_subcommand("dedup", "collapse duplicate records");
    auto* split = app.add_subcommand("split", "assign train/val/test");
    auto* diagnose = app.add_subcommand("diagnose", "compute per-image covariates");
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--predictions", predictions_dir, "YOLO prediction files dir")
        ->required();
    auto* attribute = app.add_subcommand("attribute", "stratified failure attribution");
    attribute->add_option("--diagnostics", diagnostics_path, "diagnostics CSV")
        ->required();
    attribute->add_option("--recall", recall_path, "per-image recall CSV")->required();
    auto* edge = app.add_subcommand("edge-report", "throughput from a latency log");
    edge->add_option("--latency-log", latency_path, "latency log CSV")->required();
    edge->add_option("--frames", frames, "frame count for the feasibility line");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = load_config(config_path);
        if (phash_thresh) cfg.phash_threshold = *phash_thresh;
        if (iou_thresh) cfg.eval.iou_threshold = *iou_thresh;
        if (conf_thresh) cfg.eval.conf_cutoff = *conf_thresh;

        if (ingest->parsed()) return cmd_ingest(cfg, out_dir, jobs);
        if (dedup->parsed()) return cmd_dedup(cfg, manifest_path, out_dir);
        if (split->parsed()) return cmd_split(cfg, manifest_path, out_dir, seed);
        if (diagnose->parsed()) return cmd_diagnose(cfg, manifest_path, out_dir, jobs);
        if (eval->parsed())
            return cmd_eval(cfg, manifest_path, predictions_dir, out_dir);
        if (attribute->parsed())
            return cmd_attribute(cfg, diagnostics_path, recall_path, out_dir);
        if (edge->parsed()) return cmd_edge_report(latency_path, out_dir, frames);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}
