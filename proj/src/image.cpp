#include "weather/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace weather {

namespace {

void check_min_size(int w, int h) {
    if (w < 3 || h < 3) {
        throw DimensionError("image must be at least 3x3, got " + std::to_string(w) + "x" +
                             std::to_string(h));
    }
}

void check_positive(int w, int h) {
    if (w <= 0 || h <= 0) {
        throw DimensionError("plane dimensions must be positive, got " + std::to_string(w) +
                             "x" + std::to_string(h));
    }
}

}  // namespace

ImageRgb8::ImageRgb8(int w, int h) : width(w), height(h) {
    check_min_size(w, h);
    data.assign(static_cast<std::size_t>(w) * h * 3, 0);
}

ImageRgb8::ImageRgb8(int w, int h, std::vector<std::uint8_t> bytes)
    : width(w), height(h), data(std::move(bytes)) {
    check_min_size(w, h);
    if (data.size() != static_cast<std::size_t>(w) * h * 3) {
        throw DimensionError("rgb data length does not match width*height*3");
    }
}

ImageGray8::ImageGray8(int w, int h) : width(w), height(h) {
    check_positive(w, h);
    data.assign(static_cast<std::size_t>(w) * h, 0);
}

ImageGray8::ImageGray8(int w, int h, std::vector<std::uint8_t> bytes)
    : width(w), height(h), data(std::move(bytes)) {
    check_positive(w, h);
    if (data.size() != static_cast<std::size_t>(w) * h) {
        throw DimensionError("gray data length does not match width*height");
    }
}

ImageF64::ImageF64(int w, int h) : width(w), height(h) {
    check_positive(w, h);
    data.assign(static_cast<std::size_t>(w) * h, 0.0);
}

ImageF64::ImageF64(int w, int h, std::vector<double> values)
    : width(w), height(h), data(std::move(values)) {
    check_positive(w, h);
    if (data.size() != static_cast<std::size_t>(w) * h) {
        throw DimensionError("plane data length does not match width*height");
    }
}

Kernel::Kernel(int k, std::vector<double> coefficients) : size(k), taps(std::move(coefficients)) {
    if (k < 3 || k % 2 == 0) {
        throw ParamError("kernel size must be odd and >= 3, got " + std::to_string(k));
    }
    if (taps.size() != static_cast<std::size_t>(k) * k) {
        throw ParamError("kernel tap count does not match size*size");
    }
    for (double t : taps) {
        if (!std::isfinite(t)) throw ParamError("kernel taps must be finite");
    }
}

EdgeMap::EdgeMap(int w, int h) : width(w), height(h) {
    check_positive(w, h);
    data.assign(static_cast<std::size_t>(w) * h, 0);
}

EdgeMap::EdgeMap(int w, int h, std::vector<std::uint8_t> values)
    : width(w), height(h), data(std::move(values)) {
    check_positive(w, h);
    if (data.size() != static_cast<std::size_t>(w) * h) {
        throw DimensionError("edge map length does not match width*height");
    }
    for (std::uint8_t v : data) {
        if (v != 0 && v != 255) throw ParamError("edge map values must be 0 or 255");
    }
}

ImageGray8 to_grayscale(const ImageRgb8& img) {
    ImageGray8 out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        double luma = std::round(0.299 * r + 0.587 * g + 0.114 * b);
        out.data[i] = static_cast<std::uint8_t>(std::clamp(luma, 0.0, 255.0));
    }
    return out;
}

HsvPlanes to_hsv(const ImageRgb8& img) {
    HsvPlanes out{ImageGray8(img.width, img.height), ImageGray8(img.width, img.height),
                  ImageGray8(img.width, img.height)};
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const int r = img.data[i * 3];
        const int g = img.data[i * 3 + 1];
        const int b = img.data[i * 3 + 2];
        const int v = std::max({r, g, b});
        const int lo = std::min({r, g, b});
        const int chroma = v - lo;

        int s = 0;
        if (v != 0) s = static_cast<int>(std::round(255.0 * chroma / v));

        double hue_deg = 0.0;  // 0 when chroma is 0
        if (chroma != 0) {
            if (v == r) {
                hue_deg = 60.0 * std::fmod((g - b) / static_cast<double>(chroma) + 6.0, 6.0);
            } else if (v == g) {
                hue_deg = 60.0 * ((b - r) / static_cast<double>(chroma) + 2.0);
            } else {
                hue_deg = 60.0 * ((r - g) / static_cast<double>(chroma) + 4.0);
            }
        }
        const int h = static_cast<int>(std::round(hue_deg / 360.0 * 255.0)) % 256;

        out.h.data[i] = static_cast<std::uint8_t>(h);
        out.s.data[i] = static_cast<std::uint8_t>(std::clamp(s, 0, 255));
        out.v.data[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

namespace {

// Correlation with a pre-flipped kernel; replicate border. The interior is
// handled without clamping, which is where nearly all the time goes.
ImageF64 correlate_replicate(const double* src, int w, int h, const double* taps, int k) {
    ImageF64 out(w, h);
    const int r = k / 2;
    double* dst = out.data.data();

    const bool has_interior = w >= k && h >= k;
    if (has_interior) {
        for (int y = r; y < h - r; ++y) {
            for (int x = r; x < w - r; ++x) {
                double acc = 0.0;
                const double* tap = taps;
                for (int ky = -r; ky <= r; ++ky) {
                    const double* row = src + static_cast<std::size_t>(y + ky) * w + x;
                    for (int kx = -r; kx <= r; ++kx) acc += *tap++ * row[kx];
                }
                dst[static_cast<std::size_t>(y) * w + x] = acc;
            }
        }
    }

    auto clamped = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return src[static_cast<std::size_t>(y) * w + x];
    };
    auto border_pixel = [&](int x, int y) {
        double acc = 0.0;
        const double* tap = taps;
        for (int ky = -r; ky <= r; ++ky)
            for (int kx = -r; kx <= r; ++kx) acc += *tap++ * clamped(x + kx, y + ky);
        dst[static_cast<std::size_t>(y) * w + x] = acc;
    };

    for (int y = 0; y < h; ++y) {
        if (has_interior && y >= r && y < h - r) {
            for (int x = 0; x < r; ++x) border_pixel(x, y);
            for (int x = w - r; x < w; ++x) border_pixel(x, y);
        } else {
            for (int x = 0; x < w; ++x) border_pixel(x, y);
        }
    }
    return out;
}

std::vector<double> flip_taps(const Kernel& kernel) {
    const int k = kernel.size;
    std::vector<double> flipped(kernel.taps.size());
    for (int row = 0; row < k; ++row)
        for (int col = 0; col < k; ++col)
            flipped[static_cast<std::size_t>(row) * k + col] =
                kernel.taps[static_cast<std::size_t>(k - 1 - row) * k + (k - 1 - col)];
    return flipped;
}

void check_fits(int w, int h, int k) {
    if (w < k || h < k) {
        throw DimensionError("image " + std::to_string(w) + "x" + std::to_string(h) +
                             " is smaller than the " + std::to_string(k) + "x" +
                             std::to_string(k) + " kernel");
    }
}

std::vector<double> to_plane(const ImageGray8& img) {
    std::vector<double> plane(img.data.size());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[i];
    return plane;
}

const Kernel& sobel_x_kernel() {
    static const Kernel k(3, {-1, 0, 1, -2, 0, 2, -1, 0, 1});
    return k;
}

const Kernel& sobel_y_kernel() {
    static const Kernel k(3, {-1, -2, -1, 0, 0, 0, 1, 2, 1});
    return k;
}

const Kernel& laplacian_kernel() {
    static const Kernel k(3, {0, 1, 0, 1, -4, 1, 0, 1, 0});
    return k;
}

}  // namespace

ImageF64 convolve2d(const ImageGray8& img, const Kernel& kernel) {
    check_fits(img.width, img.height, kernel.size);
    const std::vector<double> plane = to_plane(img);
    const std::vector<double> flipped = flip_taps(kernel);
    return correlate_replicate(plane.data(), img.width, img.height, flipped.data(), kernel.size);
}

ImageF64 convolve2d(const ImageF64& plane, const Kernel& kernel) {
    check_fits(plane.width, plane.height, kernel.size);
    const std::vector<double> flipped = flip_taps(kernel);
    return correlate_replicate(plane.data.data(), plane.width, plane.height, flipped.data(),
                               kernel.size);
}

ImageF64 sobel_x(const ImageGray8& img) { return convolve2d(img, sobel_x_kernel()); }

ImageF64 sobel_x(const ImageF64& plane) { return convolve2d(plane, sobel_x_kernel()); }

ImageF64 laplacian(const ImageGray8& img) { return convolve2d(img, laplacian_kernel()); }

namespace {

ImageF64 gaussian_5x5(const ImageGray8& img) {
    // Product-form 5x5 Gaussian, sigma 1.4, taps normalized to sum 1.
    static const std::vector<double> taps = [] {
        const double sigma = 1.4;
        std::vector<double> t(25);
        double sum = 0.0;
        for (int y = -2; y <= 2; ++y)
            for (int x = -2; x <= 2; ++x) {
                const double v = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
                t[static_cast<std::size_t>(y + 2) * 5 + (x + 2)] = v;
                sum += v;
            }
        for (double& v : t) v /= sum;
        return t;
    }();
    const std::vector<double> plane = to_plane(img);
    // Symmetric kernel, so correlation equals convolution.
    return correlate_replicate(plane.data(), img.width, img.height, taps.data(), 5);
}

}  // namespace

EdgeMap canny(const ImageGray8& img, double low, double high) {
    if (!(low >= 0.0) || !(low < high)) {
        throw ParamError("canny thresholds require 0 <= low < high");
    }
    check_fits(img.width, img.height, 5);

    const int w = img.width;
    const int h = img.height;

    const ImageF64 smoothed = gaussian_5x5(img);
    const ImageF64 gx = convolve2d(smoothed, sobel_x_kernel());
    const ImageF64 gy = convolve2d(smoothed, sobel_y_kernel());

    std::vector<double> mag(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(gx.data[i], gy.data[i]);

    auto mag_at = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
        return mag[static_cast<std::size_t>(y) * w + x];
    };

    // 0 = suppressed, 1 = weak candidate, 2 = strong seed
    const double tan22 = 0.4142135623730951;
    const double tan67 = 2.414213562373095;
    std::vector<std::uint8_t> mark(mag.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double m = mag[i];
            if (m < low) continue;
            const double ax = std::abs(gx.data[i]);
            const double ay = std::abs(gy.data[i]);
            double n1, n2;
            if (ay < tan22 * ax) {
                n1 = mag_at(x - 1, y);
                n2 = mag_at(x + 1, y);
            } else if (ay > tan67 * ax) {
                n1 = mag_at(x, y - 1);
                n2 = mag_at(x, y + 1);
            } else if (gx.data[i] * gy.data[i] > 0.0) {
                n1 = mag_at(x - 1, y - 1);
                n2 = mag_at(x + 1, y + 1);
            } else {
                n1 = mag_at(x + 1, y - 1);
                n2 = mag_at(x - 1, y + 1);
            }
            if (m > n1 && m >= n2) mark[i] = (m >= high) ? 2 : 1;
        }
    }

    EdgeMap out(w, h);
    std::vector<std::size_t> stack;
    stack.reserve(256);
    for (std::size_t i = 0; i < mark.size(); ++i) {
        if (mark[i] == 2 && out.data[i] == 0) {
            out.data[i] = 255;
            stack.push_back(i);
            while (!stack.empty()) {
                const std::size_t cur = stack.back();
                stack.pop_back();
                const int cx = static_cast<int>(cur % w);
                const int cy = static_cast<int>(cur / w);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (mark[ni] != 0 && out.data[ni] == 0) {
                            out.data[ni] = 255;
                            stack.push_back(ni);
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace weather
