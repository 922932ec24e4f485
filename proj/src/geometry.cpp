#include "fishpipe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fishpipe {

double iou(const NormalizedBox& a, const NormalizedBox& b) {
    const double ix = std::max(0.0, std::min(a.xmax(), b.xmax()) -
                                        std::max(a.xmin(), b.xmin()));
    const double iy = std::max(0.0, std::min(a.ymax(), b.ymax()) -
                                        std::max(a.ymin(), b.ymin()));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

PixelBox polygon_to_box(const PixelPolygon& poly) {
    if (poly.points.size() < 3)
        throw std::invalid_argument("polygon needs at least 3 points");
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : poly.points) {
        xmin = std::min(xmin, x);
        ymin = std::min(ymin, y);
        xmax = std::max(xmax, x);
        ymax = std::max(ymax, y);
    }
    if (xmax <= xmin || ymax <= ymin)
        throw std::invalid_argument("degenerate polygon: zero enclosed area");
    return {xmin, ymin, xmax, ymax};
}

NormalizedBox normalize_box(const PixelBox& box, int width_px, int height_px) {
    if (width_px <= 0 || height_px <= 0)
        throw std::invalid_argument("image dimensions must be positive");
    if (box.xmax <= box.xmin || box.ymax <= box.ymin)
        throw std::invalid_argument("invalid pixel box");
    NormalizedBox out;
    out.cx = (box.xmin + box.xmax) / (2.0 * width_px);
    out.cy = (box.ymin + box.ymax) / (2.0 * height_px);
    out.w = (box.xmax - box.xmin) / width_px;
    out.h = (box.ymax - box.ymin) / height_px;
    return out;
}

bool clamp_box(NormalizedBox& box) {
    const double x0 = box.xmin(), y0 = box.ymin();
    const double x1 = box.xmax(), y1 = box.ymax();
    if (x0 < -kBoxClampTolerance || y0 < -kBoxClampTolerance ||
        x1 > 1.0 + kBoxClampTolerance || y1 > 1.0 + kBoxClampTolerance)
        return false;
    const double cx0 = std::clamp(x0, 0.0, 1.0);
    const double cy0 = std::clamp(y0, 0.0, 1.0);
    const double cx1 = std::clamp(x1, 0.0, 1.0);
    const double cy1 = std::clamp(y1, 0.0, 1.0);
    box.cx = (cx0 + cx1) / 2.0;
    box.cy = (cy0 + cy1) / 2.0;
    box.w = cx1 - cx0;
    box.h = cy1 - cy0;
    return true;
}

}  // namespace fishpipe
