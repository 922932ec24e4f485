#include "fishpipe/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <unordered_set>

#include <json.hpp>

namespace fishpipe {

using nlohmann::json;

std::string to_string(Split s) {
    switch (s) {
        case Split::kTrain: return "train";
        case Split::kVal: return "val";
        case Split::kTest: return "test";
        default: return "unassigned";
    }
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::kTrain;
    if (s == "val") return Split::kVal;
    if (s == "test") return Split::kTest;
    if (s == "unassigned") return Split::kUnassigned;
    throw std::runtime_error("unknown split value: " + s);
}

std::vector<std::string> validate_record(const ImageRecord& record) {
    std::vector<std::string> out;
    if (record.image_id.empty()) out.push_back("image_id must be nonempty");
    if (record.source.empty()) out.push_back("source must be nonempty");
    if (record.width_px <= 0) out.push_back("width_px must be > 0");
    if (record.height_px <= 0) out.push_back("height_px must be > 0");
    for (size_t i = 0; i < record.annotations.size(); ++i) {
        const auto& a = record.annotations[i];
        const std::string at = "annotation[" + std::to_string(i) + "]: ";
        if (a.class_id < 0) out.push_back(at + "class_id must be >= 0");
        const auto& b = a.box;
        if (b.cx < 0.0 || b.cx > 1.0) out.push_back(at + "cx out of [0,1]");
        if (b.cy < 0.0 || b.cy > 1.0) out.push_back(at + "cy out of [0,1]");
        if (!(b.w > 0.0)) out.push_back(at + "w must be > 0");
        else if (b.w > 1.0) out.push_back(at + "w out of (0,1]");
        if (!(b.h > 0.0)) out.push_back(at + "h must be > 0");
        else if (b.h > 1.0) out.push_back(at + "h out of (0,1]");
        NormalizedBox copy = b;
        if (b.w > 0.0 && b.h > 0.0 && !clamp_box(copy))
            out.push_back(at + "box corners exceed [0,1] beyond tolerance");
    }
    return out;
}

namespace {

std::string phash_hex(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
    return buf;
}

uint64_t phash_parse(const std::string& s) {
    if (s.size() != 16) throw std::runtime_error("perceptual_hash: expected 16 hex chars");
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + 16, v, 16);
    if (ec != std::errc() || p != s.data() + 16)
        throw std::runtime_error("perceptual_hash: bad hex");
    return v;
}

json diag_to_json(const DiagnosticVector& d) {
    return json{{"turbidity", d.turbidity},
                {"rms_contrast", d.rms_contrast},
                {"blur_var", d.blur_var},
                {"ratio_r", d.ratio_r},
                {"ratio_g", d.ratio_g},
                {"ratio_b", d.ratio_b},
                {"uicm", d.uicm},
                {"uism", d.uism},
                {"uiconm", d.uiconm},
                {"uiqm", d.uiqm},
                {"uciqe", d.uciqe},
                {"fish_count", d.fish_count},
                {"overlap_pairwise", d.overlap_pairwise},
                {"overlap_maxmean", d.overlap_maxmean}};
}

DiagnosticVector diag_from_json(const json& j) {
    DiagnosticVector d;
    d.turbidity = j.at("turbidity").get<double>();
    d.rms_contrast = j.at("rms_contrast").get<double>();
    d.blur_var = j.at("blur_var").get<double>();
    d.ratio_r = j.at("ratio_r").get<double>();
    d.ratio_g = j.at("ratio_g").get<double>();
    d.ratio_b = j.at("ratio_b").get<double>();
    d.uicm = j.at("uicm").get<double>();
    d.uism = j.at("uism").get<double>();
    d.uiconm = j.at("uiconm").get<double>();
    d.uiqm = j.at("uiqm").get<double>();
    d.uciqe = j.at("uciqe").get<double>();
    d.fish_count = j.at("fish_count").get<int>();
    d.overlap_pairwise = j.at("overlap_pairwise").get<double>();
    d.overlap_maxmean = j.at("overlap_maxmean").get<double>();
    return d;
}

json record_to_json(const ImageRecord& r) {
    json anns = json::array();
    for (const auto& a : r.annotations)
        anns.push_back(json{{"class_id", a.class_id},
                            {"cx", a.box.cx},
                            {"cy", a.box.cy},
                            {"w", a.box.w},
                            {"h", a.box.h}});
    json j{{"image_id", r.image_id},
           {"source", r.source},
           {"path", r.path},
           {"width_px", r.width_px},
           {"height_px", r.height_px},
           {"annotations", std::move(anns)},
           {"content_digest", r.content_digest},
           {"perceptual_hash", phash_hex(r.perceptual_hash)},
           {"split", to_string(r.split)}};
    if (r.diagnostics) j["diagnostics"] = diag_to_json(*r.diagnostics);
    return j;
}

ImageRecord record_from_json(const json& j) {
    ImageRecord r;
    r.image_id = j.at("image_id").get<std::string>();
    r.source = j.at("source").get<std::string>();
    r.path = j.at("path").get<std::string>();
    r.width_px = j.at("width_px").get<int>();
    r.height_px = j.at("height_px").get<int>();
    for (const auto& a : j.at("annotations")) {
        Annotation ann;
        ann.class_id = a.at("class_id").get<int>();
        ann.box.cx = a.at("cx").get<double>();
        ann.box.cy = a.at("cy").get<double>();
        ann.box.w = a.at("w").get<double>();
        ann.box.h = a.at("h").get<double>();
        r.annotations.push_back(ann);
    }
    r.content_digest = j.at("content_digest").get<std::string>();
    r.perceptual_hash = phash_parse(j.at("perceptual_hash").get<std::string>());
    r.split = split_from_string(j.at("split").get<std::string>());
    if (j.contains("diagnostics") && !j.at("diagnostics").is_null())
        r.diagnostics = diag_from_json(j.at("diagnostics"));
    return r;
}

}  // namespace

std::string save_manifest(const Manifest& m) {
    json reg = json::array();
    for (const auto& s : m.registry)
        reg.push_back(json{{"name", s.name}, {"root", s.root}, {"adapter", s.adapter}});
    json recs = json::array();
    for (const auto& r : m.records) recs.push_back(record_to_json(r));
    json j{{"schema_version", m.schema_version},
           {"split_seed", m.split_seed},
           {"registry", std::move(reg)},
           {"records", std::move(recs)}};
    return j.dump(2) + "\n";
}

Manifest load_manifest(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("manifest parse error at byte " +
                                 std::to_string(e.byte) + ": " + e.what());
    }
    try {
        Manifest m;
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != 1)
            throw std::runtime_error("unsupported schema_version " +
                                     std::to_string(m.schema_version));
        m.split_seed = j.at("split_seed").get<uint64_t>();
        for (const auto& s : j.at("registry")) {
            SourceDescriptor d;
            d.name = s.at("name").get<std::string>();
            d.root = s.at("root").get<std::string>();
            d.adapter = s.at("adapter").get<std::string>();
            m.registry.push_back(std::move(d));
        }
        std::unordered_set<std::string> seen;
        for (const auto& r : j.at("records")) {
            auto rec = record_from_json(r);
            if (!seen.insert(rec.image_id).second)
                throw std::runtime_error("duplicate image_id: " + rec.image_id);
            m.records.push_back(std::move(rec));
        }
        return m;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("manifest field error: ") + e.what());
    }
}

}  // namespace fishpipe
