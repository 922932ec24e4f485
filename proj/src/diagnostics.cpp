#include "fishpipe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fishpipe/scene.hpp"

namespace fishpipe {

namespace {

size_t pixel_count(const Image& img) {
    return static_cast<size_t>(img.width()) * img.height();
}

void require_nonempty(const Image& img) {
    if (img.empty()) throw std::invalid_argument("empty image");
}

// Mean and population variance in one pass.
struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    if (v.empty()) return m;
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / v.size();
    double acc = 0.0;
    for (double x : v) acc += (x - m.mean) * (x - m.mean);
    m.var = acc / v.size();
    return m;
}

std::vector<double> luma_plane(const Image& img) {
    std::vector<double> out;
    out.reserve(pixel_count(img));
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.push_back(img.luma(x, y));
    return out;
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

double turbidity(const Image& image) {
    require_nonempty(image);
    double sum = 0.0;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            sum += std::min({image.r(x, y), image.g(x, y), image.b(x, y)});
    return sum / pixel_count(image);
}

double rms_contrast(const Image& image) {
    require_nonempty(image);
    return std::sqrt(moments(luma_plane(image)).var);
}

double blur_variance(const Image& image) {
    require_nonempty(image);
    const int w = image.width(), h = image.height();
    if (w < 3 || h < 3)
        throw std::invalid_argument("image smaller than the 3x3 Laplacian kernel");
    std::vector<double> lum = luma_plane(image);
    auto at = [&](int x, int y) {
        return lum[static_cast<size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
    };
    std::vector<double> response;
    response.reserve(lum.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            response.push_back(4.0 * at(x, y) - at(x - 1, y) - at(x + 1, y) -
                               at(x, y - 1) - at(x, y + 1));
    return moments(response).var;
}

ChannelRatios channel_ratios(const Image& image) {
    require_nonempty(image);
    double sr = 0.0, sg = 0.0, sb = 0.0;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            sr += image.r(x, y);
            sg += image.g(x, y);
            sb += image.b(x, y);
        }
    const double grand = sr + sg + sb;
    if (grand <= 0.0)
        throw std::domain_error("channel ratios undefined: all-black image");
    return {sr / grand, sg / grand, sb / grand};
}

double uicm(const Image& image) {
    require_nonempty(image);
    std::vector<double> rg, yb;
    rg.reserve(pixel_count(image));
    yb.reserve(pixel_count(image));
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            const double r = image.r(x, y), g = image.g(x, y), b = image.b(x, y);
            rg.push_back(r - g);
            yb.push_back((r + g) / 2.0 - b);
        }
    const Moments m_rg = moments(rg);
    const Moments m_yb = moments(yb);
    return -std::sqrt(m_rg.mean * m_rg.mean + m_yb.mean * m_yb.mean) -
           0.3 * std::sqrt(m_rg.var + m_yb.var);
}

double uism(const Image& image) {
    require_nonempty(image);
    const int w = image.width(), h = image.height();
    std::vector<double> lum = luma_plane(image);
    auto at = [&](int x, int y) {
        return lum[static_cast<size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
    };
    double sum = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = -at(x - 1, y - 1) + at(x + 1, y - 1) -
                              2.0 * at(x - 1, y) + 2.0 * at(x + 1, y) -
                              at(x - 1, y + 1) + at(x + 1, y + 1);
            const double gy = -at(x - 1, y - 1) - 2.0 * at(x, y - 1) -
                              at(x + 1, y - 1) + at(x - 1, y + 1) +
                              2.0 * at(x, y + 1) + at(x + 1, y + 1);
            sum += std::sqrt(gx * gx + gy * gy);
        }
    return sum / pixel_count(image);
}

double uiconm(const Image& image, int block) {
    require_nonempty(image);
    if (block <= 0) throw std::invalid_argument("block size must be positive");
    const int bx = image.width() / block;
    const int by = image.height() / block;
    if (bx == 0 || by == 0)
        throw std::invalid_argument("image smaller than one contrast block");
    double sum = 0.0;
    for (int j = 0; j < by; ++j)
        for (int i = 0; i < bx; ++i) {
            double lo = 1.0, hi = 0.0;
            for (int y = j * block; y < (j + 1) * block; ++y)
                for (int x = i * block; x < (i + 1) * block; ++x) {
                    const double v = image.luma(x, y);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            if (hi + lo > 0.0) sum += (hi - lo) / (hi + lo);
        }
    return sum / (static_cast<double>(bx) * by);
}

double uiqm(const Image& image) {
    return kUiqmC1 * uicm(image) + kUiqmC2 * uism(image) +
           kUiqmC3 * uiconm(image);
}

namespace {

double srgb_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double eps = 216.0 / 24389.0;
    constexpr double kappa = 24389.0 / 27.0;
    return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

// CIELab chroma of one sRGB pixel (D65 white).
double lab_chroma(double r, double g, double b) {
    const double rl = srgb_linear(r), gl = srgb_linear(g), bl = srgb_linear(b);
    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
    const double fx = lab_f(x / 0.95047);
    const double fy = lab_f(y);
    const double fz = lab_f(z / 1.08883);
    const double a = 500.0 * (fx - fy);
    const double bb = 200.0 * (fy - fz);
    return std::sqrt(a * a + bb * bb);
}

double hsv_saturation(double r, double g, double b) {
    const double hi = std::max({r, g, b});
    if (hi <= 0.0) return 0.0;
    const double lo = std::min({r, g, b});
    return (hi - lo) / hi;
}

}  // namespace

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of empty set");
    std::sort(values.begin(), values.end());
    const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * (values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(rank));
    const size_t hi = static_cast<size_t>(std::ceil(rank));
    const double frac = rank - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double uciqe(const Image& image) {
    require_nonempty(image);
    std::vector<double> chroma;
    chroma.reserve(pixel_count(image));
    double sat_sum = 0.0;
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) {
            const double r = image.r(x, y), g = image.g(x, y), b = image.b(x, y);
            chroma.push_back(lab_chroma(r, g, b));
            sat_sum += hsv_saturation(r, g, b);
        }
    const double sigma_c = std::sqrt(moments(chroma).var);
    std::vector<double> lum = luma_plane(image);
    const double con_l = percentile(lum, 99.0) - percentile(lum, 1.0);
    const double mu_s = sat_sum / pixel_count(image);
    return kUciqeAlpha * sigma_c + kUciqeBeta * con_l + kUciqeGamma * mu_s;
}

DiagnosticVector compute_diagnostics(const Image& image,
                                     const std::vector<Annotation>& annotations) {
    DiagnosticVector d;
    d.turbidity = turbidity(image);
    d.rms_contrast = rms_contrast(image);
    d.blur_var = blur_variance(image);
    const ChannelRatios cr = channel_ratios(image);
    d.ratio_r = cr.r;
    d.ratio_g = cr.g;
    d.ratio_b = cr.b;
    d.uicm = uicm(image);
    d.uism = uism(image);
    // Small frames fall below one contrast block; report 0 rather than fail.
    const bool has_block = image.width() >= kUiconmBlock && image.height() >= kUiconmBlock;
    d.uiconm = has_block ? uiconm(image) : 0.0;
    d.uiqm = kUiqmC1 * d.uicm + kUiqmC2 * d.uism + kUiqmC3 * d.uiconm;
    d.uciqe = uciqe(image);
    std::vector<NormalizedBox> boxes;
    boxes.reserve(annotations.size());
    for (const auto& a : annotations) boxes.push_back(a.box);
    d.fish_count = fish_count(annotations);
    d.overlap_pairwise = pairwise_overlap_mean(boxes);
    d.overlap_maxmean = max_overlap_mean(boxes);
    return d;
}

}  // namespace fishpipe
