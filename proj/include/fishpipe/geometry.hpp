#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fishpipe {

// Axis-aligned box in normalized image coordinates (YOLO convention:
// center + size, all fractions of the image dimensions).
struct NormalizedBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double xmin() const { return cx - w / 2.0; }
    double ymin() const { return cy - h / 2.0; }
    double xmax() const { return cx + w / 2.0; }
    double ymax() const { return cy + h / 2.0; }
    double area() const { return w * h; }

    bool operator==(const NormalizedBox&) const = default;
};

// Corner-form box in pixel coordinates, intermediate form before
// normalization.
struct PixelBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    bool operator==(const PixelBox&) const = default;
};

// Closed contour in pixel coordinates, at least 3 points.
struct PixelPolygon {
    std::vector<std::pair<double, double>> points;
};

struct Annotation {
    int class_id = 0;
    NormalizedBox box;

    bool operator==(const Annotation&) const = default;
};

// Corner excursions beyond [0,1] up to this tolerance are treated as
// float round-off and clamped; anything larger is a validation error.
inline constexpr double kBoxClampTolerance = 1e-6;

// Intersection-over-Union between two normalized boxes; 0 when disjoint.
double iou(const NormalizedBox& a, const NormalizedBox& b);

// Minimal axis-aligned enclosing rectangle of a polygon.
// Throws std::invalid_argument on polygons with fewer than 3 points or
// zero enclosed area (collinear points).
PixelBox polygon_to_box(const PixelPolygon& poly);

// Pixel corner box -> normalized center form.
NormalizedBox normalize_box(const PixelBox& box, int width_px, int height_px);

// Clamps box corners into [0,1] when within kBoxClampTolerance.
// Returns false if the excursion is too large to clamp.
bool clamp_box(NormalizedBox& box);

}  // namespace fishpipe
