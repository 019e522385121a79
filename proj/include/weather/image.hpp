#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "weather/error.hpp"

namespace weather {

// 8-bit interleaved RGB raster, row-major. Minimum size 3x3 so that every
// 3x3 kernel has a valid interior.
struct ImageRgb8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // R,G,B per pixel

    ImageRgb8() = default;
    ImageRgb8(int w, int h);
    ImageRgb8(int w, int h, std::vector<std::uint8_t> bytes);

    std::uint8_t at(int x, int y, int channel) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
    std::uint8_t& at(int x, int y, int channel) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Single-channel 8-bit plane.
struct ImageGray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    ImageGray8() = default;
    ImageGray8(int w, int h);
    ImageGray8(int w, int h, std::vector<std::uint8_t> bytes);

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Real-valued plane; operations keep every value finite.
struct ImageF64 {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ImageF64() = default;
    ImageF64(int w, int h);
    ImageF64(int w, int h, std::vector<double> values);

    double at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Square convolution kernel with odd size >= 3.
struct Kernel {
    int size = 3;
    std::vector<double> taps;  // size*size coefficients, row-major

    Kernel() : taps(9, 0.0) {}
    Kernel(int k, std::vector<double> coefficients);

    double at(int col, int row) const {
        return taps[static_cast<std::size_t>(row) * size + col];
    }
};

// Strictly binary plane, values in {0, 255}.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    EdgeMap() = default;
    EdgeMap(int w, int h);  // all zero
    EdgeMap(int w, int h, std::vector<std::uint8_t> values);

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct HsvPlanes {
    ImageGray8 h;
    ImageGray8 s;
    ImageGray8 v;
};

// Per pixel luma = round(0.299*R + 0.587*G + 0.114*B), clamped to [0,255].
ImageGray8 to_grayscale(const ImageRgb8& img);

// Byte-scaled HSV: V = max(R,G,B); S = 0 when V = 0, else round(255*(V-min)/V);
// H by the hexagonal formula scaled to 0-255.
HsvPlanes to_hsv(const ImageRgb8& img);

// True convolution (kernel flipped) with replicate-border padding. Output
// dimensions equal input dimensions.
ImageF64 convolve2d(const ImageGray8& img, const Kernel& kernel);
ImageF64 convolve2d(const ImageF64& plane, const Kernel& kernel);

// convolve2d with [[-1,0,1],[-2,0,2],[-1,0,1]]; values unnormalized (+-1020).
ImageF64 sobel_x(const ImageGray8& img);
ImageF64 sobel_x(const ImageF64& plane);

// convolve2d with [[0,1,0],[1,-4,1],[0,1,0]].
ImageF64 laplacian(const ImageGray8& img);

// Canny pipeline: 5x5 Gaussian (sigma 1.4), Sobel magnitude/direction,
// non-maximum suppression over 4 quantized directions, double threshold,
// hysteresis via 8-connectivity. Thresholds live on the Sobel-magnitude
// scale; a pixel below `low` is never promoted. Requires 0 <= low < high.
EdgeMap canny(const ImageGray8& img, double low = 100.0, double high = 200.0);

}  // namespace weather
