#pragma once

#include <vector>

#include "fishpipe/geometry.hpp"
#include "fishpipe/image.hpp"
#include "fishpipe/manifest.hpp"

namespace fishpipe {

// Visual-degradation covariates. All intensities are in [0,1] per channel;
// luminance is Rec.601 luma.

// Dark-channel proxy: mean over pixels of the per-pixel channel minimum.
double turbidity(const Image& image);

// Population standard deviation of luminance.
double rms_contrast(const Image& image);

// Variance of the 3x3 Laplacian of luminance (center 4, cross -1),
// borders edge-replicated. Throws on images smaller than 3x3.
double blur_variance(const Image& image);

struct ChannelRatios {
    double r = 0.0, g = 0.0, b = 0.0;
};

// Per-channel intensity sums over the grand sum; the triple sums to 1.
// Throws std::domain_error on an all-black image (grand sum 0).
ChannelRatios channel_ratios(const Image& image);

inline constexpr double kUiqmC1 = 0.0282;
inline constexpr double kUiqmC2 = 0.2953;
inline constexpr double kUiqmC3 = 3.5753;
inline constexpr int kUiconmBlock = 64;

// Colourfulness from the RG / YB opponent channels.
double uicm(const Image& image);
// Mean Sobel gradient magnitude of luminance.
double uism(const Image& image);
// Mean Michelson contrast over non-overlapping blocks of luminance;
// partial edge blocks are discarded, zero-denominator blocks contribute 0.
// Throws if the image holds no full block.
double uiconm(const Image& image, int block = kUiconmBlock);
// c1*UICM + c2*UISM + c3*UIConM.
double uiqm(const Image& image);

inline constexpr double kUciqeAlpha = 0.4680;
inline constexpr double kUciqeBeta = 0.2745;
inline constexpr double kUciqeGamma = 0.2576;

// alpha * std(CIELab chroma) + beta * (p99 - p1 of luminance)
// + gamma * mean(HSV saturation).
double uciqe(const Image& image);

// Linear-interpolation percentile of a value set, p in [0,100].
double percentile(std::vector<double> values, double p);

// Full covariate vector including the scene-structure fields.
DiagnosticVector compute_diagnostics(const Image& image,
                                     const std::vector<Annotation>& annotations);

}  // namespace fishpipe
