#include "weather/features.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace weather {

namespace {

PlaneStats plane_stats(const double* values, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i];
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mean;
        sq += d * d;
    }
    return {mean, sq / static_cast<double>(n)};
}

PlaneStats byte_stats(const std::uint8_t* values, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i];
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mean;
        sq += d * d;
    }
    return {mean, sq / static_cast<double>(n)};
}

// One circle sample: either an exact pixel read or a bilinear blend.
struct LbpSample {
    int x0 = 0, y0 = 0;
    double w00 = 0, w01 = 0, w10 = 0, w11 = 0;
    bool exact = false;
};

std::array<LbpSample, 8> lbp_offsets(int radius) {
    std::array<LbpSample, 8> samples;
    for (int k = 0; k < 8; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / 8.0;
        double dx = radius * std::cos(angle);
        double dy = radius * std::sin(angle);
        // Snap offsets that are integral up to floating noise, so axis
        // neighbors are exact pixel reads.
        if (std::abs(dx - std::round(dx)) < 1e-9) dx = std::round(dx);
        if (std::abs(dy - std::round(dy)) < 1e-9) dy = std::round(dy);

        LbpSample s;
        const double fx = std::floor(dx);
        const double fy = std::floor(dy);
        s.x0 = static_cast<int>(fx);
        s.y0 = static_cast<int>(fy);
        const double ax = dx - fx;
        const double ay = dy - fy;
        s.exact = (ax == 0.0 && ay == 0.0);
        s.w00 = (1.0 - ax) * (1.0 - ay);
        s.w01 = ax * (1.0 - ay);
        s.w10 = (1.0 - ax) * ay;
        s.w11 = ax * ay;
        samples[static_cast<std::size_t>(k)] = s;
    }
    return samples;
}

}  // namespace

double brightness(const ImageGray8& hsv_v_plane) {
    if (hsv_v_plane.data.empty()) throw DimensionError("brightness requires a nonempty plane");
    return byte_stats(hsv_v_plane.data.data(), hsv_v_plane.data.size()).mean;
}

double saturation(const ImageGray8& hsv_s_plane) {
    if (hsv_s_plane.data.empty()) throw DimensionError("saturation requires a nonempty plane");
    return byte_stats(hsv_s_plane.data.data(), hsv_s_plane.data.size()).mean;
}

double noise_level(const ImageGray8& gray) {
    const ImageF64 lap = laplacian(gray);
    return plane_stats(lap.data.data(), lap.data.size()).var;
}

double blur_metric(const ImageGray8& gray) { return noise_level(gray); }

double edge_strength_x(const ImageGray8& gray) {
    const ImageF64 sx = sobel_x(gray);
    double sum = 0.0;
    for (double v : sx.data) sum += std::abs(v);
    return sum / static_cast<double>(sx.data.size());
}

double motion_blur_x(const ImageGray8& gray) {
    const ImageF64 sx = sobel_x(gray);
    return plane_stats(sx.data.data(), sx.data.size()).var;
}

ImageGray8 lbp_map(const ImageGray8& gray, const LbpParams& params) {
    const int r = params.radius;
    if (r < 1) throw ParamError("lbp radius must be >= 1");
    if (gray.width <= 2 * r || gray.height <= 2 * r) {
        throw DimensionError("lbp radius " + std::to_string(r) + " needs an image larger than " +
                             std::to_string(2 * r) + "x" + std::to_string(2 * r));
    }

    const std::array<LbpSample, 8> samples = lbp_offsets(r);
    const int w = gray.width;
    const std::uint8_t* src = gray.data.data();

    ImageGray8 out(gray.width - 2 * r, gray.height - 2 * r);
    std::uint8_t* dst = out.data.data();

    for (int y = r; y < gray.height - r; ++y) {
        for (int x = r; x < gray.width - r; ++x) {
            const double center = src[static_cast<std::size_t>(y) * w + x];
            unsigned code = 0;
            for (int k = 0; k < 8; ++k) {
                const LbpSample& s = samples[static_cast<std::size_t>(k)];
                const std::size_t base =
                    static_cast<std::size_t>(y + s.y0) * w + (x + s.x0);
                double value;
                if (s.exact) {
                    value = src[base];
                } else {
                    value = s.w00 * src[base] + s.w01 * src[base + 1] +
                            s.w10 * src[base + w] + s.w11 * src[base + w + 1];
                }
                // The tolerance absorbs interpolation rounding so exact ties
                // (constant regions) reliably set the bit.
                if (value >= center - 1e-6) code |= 1u << k;
            }
            *dst++ = static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

PlaneStats lbp_stats(const ImageGray8& gray, int radius) {
    const ImageGray8 codes = lbp_map(gray, LbpParams{radius});
    return byte_stats(codes.data.data(), codes.data.size());
}

PlaneStats edge_stats(const EdgeMap& edges) {
    if (edges.data.empty()) throw DimensionError("edge_stats requires a nonempty map");
    return byte_stats(edges.data.data(), edges.data.size());
}

PlaneStats color_stats(const ImageGray8& channel, ColorStatMode mode) {
    if (channel.data.empty()) throw DimensionError("color_stats requires a nonempty plane");

    std::array<double, 256> hist{};
    for (std::uint8_t v : channel.data) hist[v] += 1.0;

    if (mode == ColorStatMode::literal) {
        // Moments of the 256 histogram counts themselves.
        double mean = 0.0;
        for (double c : hist) mean += c;
        mean /= 256.0;
        double var = 0.0;
        for (double c : hist) {
            const double d = c - mean;
            var += d * d;
        }
        return {mean, var / 256.0};
    }

    const double n = static_cast<double>(channel.data.size());
    double mean = 0.0;
    for (int j = 0; j < 256; ++j) mean += j * hist[static_cast<std::size_t>(j)];
    mean /= n;
    double var = 0.0;
    for (int j = 0; j < 256; ++j) {
        const double d = j - mean;
        var += d * d * hist[static_cast<std::size_t>(j)];
    }
    return {mean, var / n};
}

FeatureVector extract_features(const ImageRgb8& img, const ExtractionConfig& config) {
    if (img.width < 7 || img.height < 7) {
        throw DimensionError("extract_features needs at least 7x7 (lbp radius 3), got " +
                             std::to_string(img.width) + "x" + std::to_string(img.height));
    }

    const ImageGray8 gray = to_grayscale(img);
    const HsvPlanes hsv = to_hsv(img);

    FeatureVector out;
    out.values[0] = brightness(hsv.v);
    out.values[1] = saturation(hsv.s);

    {
        const ImageF64 lap = laplacian(gray);
        const double var = plane_stats(lap.data.data(), lap.data.size()).var;
        out.values[2] = var;  // noise_level
        out.values[3] = var;  // blur_metric, same definition
    }
    {
        const ImageF64 sx = sobel_x(gray);
        double abs_sum = 0.0;
        for (double v : sx.data) abs_sum += std::abs(v);
        out.values[4] = abs_sum / static_cast<double>(sx.data.size());
        out.values[5] = plane_stats(sx.data.data(), sx.data.size()).var;
    }
    for (int radius = 1; radius <= 3; ++radius) {
        const PlaneStats s = lbp_stats(gray, radius);
        out.values[static_cast<std::size_t>(4 + 2 * radius)] = s.mean;
        out.values[static_cast<std::size_t>(5 + 2 * radius)] = s.var;
    }
    {
        const EdgeMap edges = canny(gray, config.canny_low, config.canny_high);
        const PlaneStats s = edge_stats(edges);
        out.values[12] = s.mean;
        out.values[13] = s.var;
    }
    // Channel order B, G, R.
    const int channel_order[3] = {2, 1, 0};
    for (int c = 0; c < 3; ++c) {
        ImageGray8 plane(img.width, img.height);
        const int ch = channel_order[c];
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            plane.data[i] = img.data[i * 3 + static_cast<std::size_t>(ch)];
        }
        const PlaneStats s = color_stats(plane, config.color_mode);
        out.values[static_cast<std::size_t>(14 + 2 * c)] = s.mean;
        out.values[static_cast<std::size_t>(15 + 2 * c)] = s.var;
    }
    return out;
}

}  // namespace weather
