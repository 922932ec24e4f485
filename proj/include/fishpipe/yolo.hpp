#pragma once

#include <string>
#include <vector>

#include "fishpipe/geometry.hpp"

namespace fishpipe {

struct LineDiagnostic {
    int line_number = 0;  // 1-based
    std::string message;
};

struct YoloParseResult {
    std::vector<Annotation> annotations;
    std::vector<LineDiagnostic> malformed;
};

// Parses "class_id cx cy w h" lines. Malformed lines are reported, not
// fatal; line order is preserved. Empty text is a background-only image.
YoloParseResult parse_yolo_label_file(const std::string& text,
                                      int width_px, int height_px);

// One line per annotation, 6 fixed decimal places, LF endings.
std::string serialize_yolo(const std::vector<Annotation>& annotations);

// Maps every class_id to 0; geometry and count unchanged.
std::vector<Annotation> remap_to_single_class(std::vector<Annotation> annotations);

// Prediction entering detection evaluation.
struct Detection {
    NormalizedBox box;
    double confidence = 0.0;
};

struct PredictionParseResult {
    std::vector<Detection> detections;
    std::vector<LineDiagnostic> malformed;
};

// Parses "class_id cx cy w h conf" prediction lines.
PredictionParseResult parse_yolo_predictions(const std::string& text);

}  // namespace fishpipe
