#pragma once

#include <array>
#include <string_view>

#include "weather/image.hpp"

namespace weather {

inline constexpr int kFeatureCount = 20;
inline constexpr int kFeatureSchemaVersion = 1;

// Schema v1 slot names, order immutable.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureSchema = {
    "brightness",    "saturation",  "noise_level", "blur_metric", "edge_strength_x",
    "motion_blur_x", "lbp_mean_r1", "lbp_var_r1",  "lbp_mean_r2", "lbp_var_r2",
    "lbp_mean_r3",   "lbp_var_r3",  "edges_mean",  "edges_var",   "color_mean_b",
    "color_var_b",   "color_mean_g", "color_var_g", "color_mean_r", "color_var_r"};

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    int schema_version = kFeatureSchemaVersion;

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// Interpretation of the per-channel histogram moments. `intensity` treats the
// histogram as a weight over intensity values (mean/variance of the channel
// bytes); `literal` takes moments of the 256 histogram counts themselves.
enum class ColorStatMode { intensity, literal };

struct ExtractionConfig {
    double canny_low = 100.0;
    double canny_high = 200.0;
    ColorStatMode color_mode = ColorStatMode::intensity;
};

// P = 8 sample points on the radius-R circle, bilinear interpolation,
// neighbor >= center sets the bit (with a 1e-6 slack so interpolation
// rounding cannot clear a tie).
struct LbpParams {
    int radius = 1;
};

struct PlaneStats {
    double mean = 0.0;
    double var = 0.0;  // population variance
};

double brightness(const ImageGray8& hsv_v_plane);
double saturation(const ImageGray8& hsv_s_plane);

// Population variance of the Laplacian plane. blur_metric is defined as the
// same quantity and keeps its own schema slot.
double noise_level(const ImageGray8& gray);
double blur_metric(const ImageGray8& gray);

// Mean absolute value / population variance of the Sobel-x plane.
double edge_strength_x(const ImageGray8& gray);
double motion_blur_x(const ImageGray8& gray);

// Code plane over the interior (pixels within `radius` of the border are
// excluded), so output dimensions are (w-2R) x (h-2R).
ImageGray8 lbp_map(const ImageGray8& gray, const LbpParams& params);
PlaneStats lbp_stats(const ImageGray8& gray, int radius);

PlaneStats edge_stats(const EdgeMap& edges);
PlaneStats color_stats(const ImageGray8& channel, ColorStatMode mode = ColorStatMode::intensity);

// All 20 slots in schema order; color stats in B, G, R order. Requires at
// least 7x7 (LBP radius 3 interior).
FeatureVector extract_features(const ImageRgb8& img, const ExtractionConfig& config = {});

}  // namespace weather
