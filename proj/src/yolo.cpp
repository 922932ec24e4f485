#include "fishpipe/yolo.hpp"

#include <cstdio>
#include <sstream>

namespace fishpipe {

namespace {

bool parse_fields(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::istringstream ss(line);
    double v;
    while (ss >> v) out.push_back(v);
    ss.clear();
    std::string rest;
    ss >> rest;
    return rest.empty();
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

YoloParseResult parse_yolo_label_file(const std::string& text,
                                      int width_px, int height_px) {
    if (width_px <= 0 || height_px <= 0)
        throw std::invalid_argument("image dimensions must be positive");
    YoloParseResult result;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    std::vector<double> fields;
    while (std::getline(stream, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        if (!parse_fields(line, fields) || fields.size() != 5) {
            result.malformed.push_back({line_no, "expected 5 numeric fields"});
            continue;
        }
        const double class_f = fields[0];
        if (class_f < 0 || class_f != static_cast<int>(class_f)) {
            result.malformed.push_back({line_no, "class_id must be a non-negative integer"});
            continue;
        }
        Annotation ann;
        ann.class_id = static_cast<int>(class_f);
        ann.box = {fields[1], fields[2], fields[3], fields[4]};
        if (ann.box.cx < 0.0 || ann.box.cx > 1.0 || ann.box.cy < 0.0 ||
            ann.box.cy > 1.0 || ann.box.w <= 0.0 || ann.box.w > 1.0 ||
            ann.box.h <= 0.0 || ann.box.h > 1.0) {
            result.malformed.push_back({line_no, "coordinates out of range"});
            continue;
        }
        if (!clamp_box(ann.box)) {
            result.malformed.push_back({line_no, "box corners exceed [0,1] beyond tolerance"});
            continue;
        }
        result.annotations.push_back(ann);
    }
    return result;
}

std::string serialize_yolo(const std::vector<Annotation>& annotations) {
    std::string out;
    char buf[128];
    for (const auto& a : annotations) {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n",
                      a.class_id, a.box.cx, a.box.cy, a.box.w, a.box.h);
        out += buf;
    }
    return out;
}

std::vector<Annotation> remap_to_single_class(std::vector<Annotation> annotations) {
    for (auto& a : annotations) a.class_id = 0;
    return annotations;
}

PredictionParseResult parse_yolo_predictions(const std::string& text) {
    PredictionParseResult result;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    std::vector<double> fields;
    while (std::getline(stream, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        if (!parse_fields(line, fields) || fields.size() != 6) {
            result.malformed.push_back({line_no, "expected 6 numeric fields"});
            continue;
        }
        Detection det;
        det.box = {fields[1], fields[2], fields[3], fields[4]};
        det.confidence = fields[5];
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            result.malformed.push_back({line_no, "confidence out of [0,1]"});
            continue;
        }
        if (det.box.w <= 0.0 || det.box.h <= 0.0) {
            result.malformed.push_back({line_no, "degenerate box"});
            continue;
        }
        result.detections.push_back(det);
    }
    return result;
}

}  // namespace fishpipe
