#include "weather/augment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "weather/csv.hpp"
#include "weather/image_io.hpp"
#include "weather/threading.hpp"

namespace weather {

namespace {

// Round half away from zero, clamp to byte range.
std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

ImageF64 channel_plane(const ImageRgb8& img, int channel) {
    ImageF64 plane(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        plane.data[i] = img.data[i * 3 + static_cast<std::size_t>(channel)];
    }
    return plane;
}

ImageRgb8 blur_channels(const ImageRgb8& img, const Kernel& kernel) {
    ImageRgb8 out(img.width, img.height);
    for (int c = 0; c < 3; ++c) {
        const ImageF64 blurred = convolve2d(channel_plane(img, c), kernel);
        for (std::size_t i = 0; i < out.pixel_count(); ++i) {
            out.data[i * 3 + static_cast<std::size_t>(c)] = to_byte(blurred.data[i]);
        }
    }
    return out;
}

}  // namespace

ImageRgb8 apply_haze(const ImageRgb8& img, const HazeParams& p) {
    if (!(p.beta >= 0.0)) throw ParamError("haze beta must be >= 0");
    if (p.atmospheric_light < 0.0 || p.atmospheric_light > 255.0) {
        throw ParamError("atmospheric light must lie in [0,255]");
    }

    const double a = p.atmospheric_light;
    ImageRgb8 out(img.width, img.height);

    for (int y = 0; y < img.height; ++y) {
        double depth = 1.0;
        if (p.depth_mode == DepthMode::vertical_gradient) {
            depth = img.height > 1
                        ? static_cast<double>(img.height - 1 - y) / (img.height - 1)
                        : 1.0;
        }
        const double t = std::exp(-p.beta * depth);
        if (t == 1.0) {
            // Identity row, bypass rounding entirely.
            const std::size_t row = static_cast<std::size_t>(y) * img.width * 3;
            std::copy(img.data.begin() + static_cast<std::ptrdiff_t>(row),
                      img.data.begin() + static_cast<std::ptrdiff_t>(row + img.width * 3u),
                      out.data.begin() + static_cast<std::ptrdiff_t>(row));
            continue;
        }
        const double airlight = a * (1.0 - t);
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * img.width + x) * 3;
            out.data[i] = to_byte(img.data[i] * t + airlight);
            out.data[i + 1] = to_byte(img.data[i + 1] * t + airlight);
            out.data[i + 2] = to_byte(img.data[i + 2] * t + airlight);
        }
    }
    return out;
}

ImageRgb8 apply_low_light(const ImageRgb8& img, const LowLightParams& p) {
    if (!(p.gamma > 0.0)) throw ParamError("gamma must be > 0");

    // 256-entry LUT; channels share it.
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v) {
        lut[static_cast<std::size_t>(v)] = to_byte(255.0 * std::pow(v / 255.0, p.gamma));
    }

    ImageRgb8 out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = lut[img.data[i]];
    return out;
}

Kernel motion_blur_kernel(int length, double angle_deg) {
    if (length < 1) throw ParamError("motion blur length must be >= 1");

    int k = length % 2 == 1 ? length : length + 1;
    k = std::max(k, 3);
    std::vector<double> taps(static_cast<std::size_t>(k) * k, 0.0);

    const int center = k / 2;
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double cx = std::cos(rad);
    const double cy = std::sin(rad);

    const double half = (length - 1) / 2.0;
    int marked = 0;
    int last_x = -1, last_y = -1;
    for (int s = 0; s < length; ++s) {
        const double t = s - half;
        const int x = center + static_cast<int>(std::round(t * cx));
        const int y = center + static_cast<int>(std::round(t * cy));
        if (x == last_x && y == last_y) continue;
        last_x = x;
        last_y = y;
        taps[static_cast<std::size_t>(y) * k + x] += 1.0;
        ++marked;
    }
    for (double& t : taps) t /= marked;
    return Kernel(k, std::move(taps));
}

ImageRgb8 apply_rain(const ImageRgb8& img, const RainParams& p, RandomStream& rng) {
    if (p.drops_min < 0 || p.drops_max < p.drops_min) throw ParamError("bad drop count range");
    if (p.length_min < 1 || p.length_max < p.length_min) throw ParamError("bad drop length range");
    if (!(p.drop_alpha > 0.0) || p.drop_alpha > 1.0) throw ParamError("drop alpha must be in (0,1]");
    if (p.blur_length < 1) throw ParamError("blur length must be >= 1");

    ImageRgb8 out = img;
    const int drops = static_cast<int>(rng.uniform_int(p.drops_min, p.drops_max));

    for (int d = 0; d < drops; ++d) {
        const int x0 = static_cast<int>(rng.uniform_int(0, img.width - 1));
        const int y0 = static_cast<int>(rng.uniform_int(0, img.height - 1));
        const int len = static_cast<int>(rng.uniform_int(p.length_min, p.length_max));
        const double angle = rng.uniform(p.angle_min, p.angle_max) * std::numbers::pi / 180.0;
        const double dx = std::cos(angle);
        const double dy = std::sin(angle);

        int last_x = -1, last_y = -1;
        for (int s = 0; s < len; ++s) {
            const int x = static_cast<int>(std::lround(x0 + s * dx));
            const int y = static_cast<int>(std::lround(y0 + s * dy));
            if (x == last_x && y == last_y) continue;
            last_x = x;
            last_y = y;
            if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
            const std::size_t i = (static_cast<std::size_t>(y) * img.width + x) * 3;
            for (int c = 0; c < 3; ++c) {
                out.data[i + static_cast<std::size_t>(c)] = to_byte(
                    (1.0 - p.drop_alpha) * out.data[i + static_cast<std::size_t>(c)] +
                    p.drop_alpha * p.drop_brightness);
            }
        }
    }

    if (p.blur_length == 1) return out;
    return blur_channels(out, motion_blur_kernel(p.blur_length, p.blur_angle));
}

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::haze: return "haze";
        case Condition::low_light: return "low_light";
        case Condition::rain: return "rain";
    }
    throw ParamError("unknown condition");
}

namespace {

bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

struct ConditionJob {
    Condition condition;
    std::uint64_t stream_tag;
};

}  // namespace

CorpusManifest synthesize_corpus(const std::filesystem::path& clear_dir,
                                 const std::filesystem::path& out_dir,
                                 const std::vector<Condition>& conditions, std::uint64_t seed,
                                 const CorpusParams& params, int jobs) {
    if (!std::filesystem::is_directory(clear_dir)) {
        throw IoError("input directory does not exist: " + clear_dir.string());
    }

    std::vector<std::filesystem::path> sources;
    for (const auto& entry : std::filesystem::directory_iterator(clear_dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            sources.push_back(entry.path());
        }
    }
    std::sort(sources.begin(), sources.end());
    if (sources.empty()) {
        throw ParamError("no images found in " + clear_dir.string());
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "clear", ec);
    for (Condition c : conditions) std::filesystem::create_directories(out_dir / condition_name(c), ec);
    if (!std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory: " + out_dir.string());
    }

    const RandomStream root(seed);
    const std::size_t per_image = conditions.size() + 1;  // clear copy + transforms
    std::vector<ManifestRow> rows(sources.size() * per_image);

    parallel_for(sources.size(), jobs, [&](std::size_t idx) {
        const std::filesystem::path& src = sources[idx];
        const ImageRgb8 img = load_image(src);
        const std::size_t row_base = idx * per_image;

        const std::filesystem::path clear_out = out_dir / "clear" / src.filename();
        std::filesystem::copy_file(src, clear_out,
                                   std::filesystem::copy_options::overwrite_existing);
        rows[row_base] = {src.string(), "clear", clear_out.string(), "{}"};

        const std::string stem = src.stem().string();
        for (std::size_t c = 0; c < conditions.size(); ++c) {
            const Condition cond = conditions[c];
            // One independent stream per (image, condition).
            RandomStream stream =
                root.derive(idx * 8 + static_cast<std::uint64_t>(cond) + 1);

            ImageRgb8 transformed;
            std::string params_json;
            switch (cond) {
                case Condition::haze: {
                    const double t = stream.uniform(params.haze_t_min, params.haze_t_max);
                    const double a = stream.uniform(params.haze_a_min, params.haze_a_max);
                    HazeParams hp;
                    hp.atmospheric_light = a;
                    hp.beta = -std::log(t);
                    hp.depth_mode = params.haze_depth;
                    transformed = apply_haze(img, hp);
                    params_json = "{\"t\":" + format_double(t) + ",\"A\":" + format_double(a) +
                                  ",\"beta\":" + format_double(hp.beta) + "}";
                    break;
                }
                case Condition::low_light: {
                    const double gamma = stream.uniform(params.gamma_min, params.gamma_max);
                    transformed = apply_low_light(img, LowLightParams{gamma});
                    params_json = "{\"gamma\":" + format_double(gamma) + "}";
                    break;
                }
                case Condition::rain: {
                    const std::uint64_t rain_seed = stream.next_u64();
                    RandomStream rain_stream(rain_seed);
                    transformed = apply_rain(img, params.rain, rain_stream);
                    params_json = "{\"seed\":" + std::to_string(rain_seed) +
                                  ",\"blur_length\":" + std::to_string(params.rain.blur_length) +
                                  ",\"blur_angle\":" + format_double(params.rain.blur_angle) + "}";
                    break;
                }
            }

            const std::filesystem::path dst =
                out_dir / condition_name(cond) / (stem + ".png");
            write_png(dst, transformed);
            rows[row_base + c + 1] = {src.string(), condition_name(cond), dst.string(),
                                      params_json};
        }
    });

    CorpusManifest manifest{std::move(rows)};
    write_manifest_csv(out_dir / "manifest.csv", manifest);
    return manifest;
}

void write_manifest_csv(const std::filesystem::path& path, const CorpusManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << "source_path,condition,output_path,params\n";
    for (const ManifestRow& row : manifest.rows) {
        out << csv_escape(row.source_path) << ',' << row.condition << ','
            << csv_escape(row.output_path) << ',' << csv_escape(row.params_json) << '\n';
    }
    if (!out.good()) throw IoError("failed writing manifest: " + path.string());
}

}  // namespace weather
