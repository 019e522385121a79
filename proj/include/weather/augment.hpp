#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "weather/image.hpp"
#include "weather/random.hpp"

namespace weather {

enum class DepthMode { uniform, vertical_gradient };

// Atmospheric scattering: out = J*t + A*(1-t) with t = exp(-beta*d).
// uniform depth uses d = 1 everywhere; vertical_gradient raises d linearly
// from 0 at the bottom row to 1 at the top row. beta = 0 gives t = 1 and an
// exact identity.
struct HazeParams {
    double atmospheric_light = 220.0;  // A, applied to every channel
    double beta = 0.7;
    DepthMode depth_mode = DepthMode::uniform;
};

// Gamma correction on [0,1]-normalized channels; gamma > 1 darkens.
struct LowLightParams {
    double gamma = 2.0;
};

// Rain streak compositing followed by a motion blur. Angles are degrees
// measured from horizontal.
struct RainParams {
    int drops_min = 30;
    int drops_max = 120;
    int length_min = 8;
    int length_max = 20;
    double angle_min = 75.0;
    double angle_max = 105.0;
    double drop_brightness = 200.0;
    double drop_alpha = 0.7;  // (0,1]
    int blur_length = 7;
    double blur_angle = 90.0;
};

ImageRgb8 apply_haze(const ImageRgb8& img, const HazeParams& p);
ImageRgb8 apply_low_light(const ImageRgb8& img, const LowLightParams& p);

// Odd-sized kernel holding a rasterized line of `length` pixels at `angle`
// through the center, taps normalized to sum 1. length 1 degenerates to the
// identity kernel.
Kernel motion_blur_kernel(int length, double angle_deg);

ImageRgb8 apply_rain(const ImageRgb8& img, const RainParams& p, RandomStream& rng);

// Per-image sampling ranges for corpus synthesis. Haze is sampled by
// transmission t (beta = -ln t) with per-image A.
struct CorpusParams {
    double haze_t_min = 0.4;
    double haze_t_max = 0.8;
    double haze_a_min = 178.0;
    double haze_a_max = 255.0;
    DepthMode haze_depth = DepthMode::uniform;
    double gamma_min = 1.5;
    double gamma_max = 5.0;
    RainParams rain;
};

enum class Condition { haze, low_light, rain };

std::string condition_name(Condition c);

struct ManifestRow {
    std::string source_path;
    std::string condition;  // clear | haze | low_light | rain
    std::string output_path;
    std::string params_json;
};

struct CorpusManifest {
    std::vector<ManifestRow> rows;
};

// For every readable image under clear_dir: copies the original into
// out_dir/clear/ and writes one transformed PNG per requested condition into
// out_dir/<condition>/. Every output gets a manifest row recording its
// sampled parameters; the manifest is also written to out_dir/manifest.csv.
// The per-image random stream is derived from (seed, image index, condition),
// so results do not depend on jobs.
CorpusManifest synthesize_corpus(const std::filesystem::path& clear_dir,
                                 const std::filesystem::path& out_dir,
                                 const std::vector<Condition>& conditions, std::uint64_t seed,
                                 const CorpusParams& params = {}, int jobs = 1);

void write_manifest_csv(const std::filesystem::path& path, const CorpusManifest& manifest);

}  // namespace weather
