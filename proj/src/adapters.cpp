#include "fishpipe/adapters.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "fishpipe/image.hpp"

namespace fs = std::filesystem;

namespace fishpipe {

namespace {

constexpr double kPolygonClampPx = 0.5;

// Finds the content of the next <tag>...</tag> block at or after `pos`.
// Returns false when absent; on success `pos` advances past the block.
bool next_block(const std::string& xml, const std::string& tag, size_t& pos,
                std::string& content) {
    const std::string open = "<" + tag;
    const std::string close = "</" + tag + ">";
    const size_t start = xml.find(open, pos);
    if (start == std::string::npos) return false;
    const size_t body = xml.find('>', start);
    if (body == std::string::npos) return false;
    const size_t end = xml.find(close, body);
    if (end == std::string::npos) return false;
    content = xml.substr(body + 1, end - body - 1);
    pos = end + close.size();
    return true;
}

bool tag_value(const std::string& xml, const std::string& tag, double& value) {
    size_t pos = 0;
    std::string content;
    if (!next_block(xml, tag, pos, content)) return false;
    try {
        value = std::stod(content);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

// Clamps a coordinate into [0, limit]; false when out by more than the
// tolerance (corrupt geometry rather than round-off).
bool clamp_coord(double& v, double limit) {
    if (v < -kPolygonClampPx || v > limit + kPolygonClampPx) return false;
    v = std::clamp(v, 0.0, limit);
    return true;
}

}  // namespace

AdapterResult parse_voc_xml(const std::string& xml, int width_px, int height_px) {
    AdapterResult result;
    size_t pos = 0;
    std::string object;
    int index = 0;
    while (next_block(xml, "object", pos, object)) {
        ++index;
        std::string block;
        size_t inner = 0;
        PixelBox box;
        bool have_box = false;
        if (next_block(object, "bndbox", inner, block)) {
            double xmin, ymin, xmax, ymax;
            if (tag_value(block, "xmin", xmin) && tag_value(block, "ymin", ymin) &&
                tag_value(block, "xmax", xmax) && tag_value(block, "ymax", ymax) &&
                clamp_coord(xmin, width_px) && clamp_coord(ymin, height_px) &&
                clamp_coord(xmax, width_px) && clamp_coord(ymax, height_px) &&
                xmax > xmin && ymax > ymin) {
                box = {xmin, ymin, xmax, ymax};
                have_box = true;
            } else {
                result.dropped.push_back({index, "bad bndbox"});
                continue;
            }
        } else if (inner = 0, next_block(object, "polygon", inner, block)) {
            PixelPolygon poly;
            size_t p = 0;
            std::string xs, ys;
            size_t px = 0, py = 0;
            bool ok = true;
            while (true) {
                px = p;
                if (!next_block(block, "x", px, xs)) break;
                py = p;
                if (!next_block(block, "y", py, ys)) {
                    ok = false;
                    break;
                }
                p = std::max(px, py);
                try {
                    double x = std::stod(xs), y = std::stod(ys);
                    if (!clamp_coord(x, width_px) || !clamp_coord(y, height_px)) {
                        ok = false;
                        break;
                    }
                    poly.points.emplace_back(x, y);
                } catch (const std::exception&) {
                    ok = false;
                    break;
                }
            }
            if (!ok || poly.points.size() < 3) {
                result.dropped.push_back({index, "bad polygon"});
                continue;
            }
            try {
                box = polygon_to_box(poly);
            } catch (const std::exception&) {
                result.dropped.push_back({index, "degenerate polygon"});
                continue;
            }
            have_box = true;
        }
        if (!have_box) {
            result.dropped.push_back({index, "object without geometry"});
            continue;
        }
        Annotation ann;
        ann.class_id = 0;
        ann.box = normalize_box(box, width_px, height_px);
        if (!clamp_box(ann.box)) {
            result.dropped.push_back({index, "box outside image"});
            continue;
        }
        result.annotations.push_back(ann);
    }
    return result;
}

bool adapter_known(const std::string& name) {
    return name == "yolo" || name == "voc_xml";
}

AdapterResult run_adapter(const std::string& name, const std::string& root,
                          const std::string& rel_image, int width_px,
                          int height_px) {
    const fs::path stem = fs::path(rel_image).replace_extension();
    if (name == "yolo") {
        const fs::path label = fs::path(root) / "labels" / (stem.string() + ".txt");
        if (!fs::exists(label)) return {};  // background-only
        const YoloParseResult parsed =
            parse_yolo_label_file(read_file_text(label.string()), width_px, height_px);
        AdapterResult out;
        out.annotations = remap_to_single_class(parsed.annotations);
        out.dropped = parsed.malformed;
        return out;
    }
    if (name == "voc_xml") {
        const fs::path ann = fs::path(root) / "annotations" / (stem.string() + ".xml");
        if (!fs::exists(ann)) return {};
        return parse_voc_xml(read_file_text(ann.string()), width_px, height_px);
    }
    throw std::invalid_argument("unknown adapter: " + name);
}

}  // namespace fishpipe
