#pragma once

#include <string>
#include <vector>

#include "fishpipe/geometry.hpp"
#include "fishpipe/yolo.hpp"

namespace fishpipe {

// A source adapter maps one image of a dataset to its normalized
// single-class annotations. Sources lay out as <root>/images/... with
// annotations under <root>/labels (YOLO .txt) or <root>/annotations
// (VOC-style .xml). A missing annotation file is a background-only image.
struct AdapterResult {
    std::vector<Annotation> annotations;
    std::vector<LineDiagnostic> dropped;  // salvage report for bad entries
};

bool adapter_known(const std::string& name);

// `rel_image` is the image path relative to <root>/images.
AdapterResult run_adapter(const std::string& name, const std::string& root,
                          const std::string& rel_image, int width_px,
                          int height_px);

// VOC-style XML: <object> entries with either <bndbox> corners or a
// <polygon> point list; polygons become minimal enclosing rectangles.
AdapterResult parse_voc_xml(const std::string& xml, int width_px, int height_px);

}  // namespace fishpipe
