#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "weather/error.hpp"

using nlohmann::json;
using weather::ParamError;

namespace {

template <typename T>
void read_if_present(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

weather::DepthMode parse_depth_mode(const std::string& name) {
    if (name == "uniform") return weather::DepthMode::uniform;
    if (name == "vertical_gradient") return weather::DepthMode::vertical_gradient;
    throw ParamError("unknown depth mode '" + name + "'");
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw weather::IoError("cannot open config: " + path.string());

    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParamError("config is not valid json: " + std::string(e.what()));
    }

    RunConfig config;
    try {
        read_if_present(doc, "seed", config.seed);
        read_if_present(doc, "jobs", config.jobs);
        read_if_present(doc, "c_grid", config.c_grid);
        read_if_present(doc, "folds", config.folds);
        read_if_present(doc, "split_fraction", config.split_fraction);

        if (doc.contains("canny")) {
            read_if_present(doc.at("canny"), "low", config.canny_low);
            read_if_present(doc.at("canny"), "high", config.canny_high);
        }
        if (doc.contains("color_mode")) {
            const std::string mode = doc.at("color_mode").get<std::string>();
            if (mode == "intensity") config.color_mode = weather::ColorStatMode::intensity;
            else if (mode == "literal") config.color_mode = weather::ColorStatMode::literal;
            else throw ParamError("unknown color mode '" + mode + "'");
        }
        if (doc.contains("augment")) {
            const json& aug = doc.at("augment");
            if (aug.contains("haze")) {
                const json& haze = aug.at("haze");
                read_if_present(haze, "t_min", config.augment.haze_t_min);
                read_if_present(haze, "t_max", config.augment.haze_t_max);
                read_if_present(haze, "a_min", config.augment.haze_a_min);
                read_if_present(haze, "a_max", config.augment.haze_a_max);
                if (haze.contains("depth_mode")) {
                    config.augment.haze_depth =
                        parse_depth_mode(haze.at("depth_mode").get<std::string>());
                }
            }
            if (aug.contains("low_light")) {
                read_if_present(aug.at("low_light"), "gamma_min", config.augment.gamma_min);
                read_if_present(aug.at("low_light"), "gamma_max", config.augment.gamma_max);
            }
            if (aug.contains("rain")) {
                const json& rain = aug.at("rain");
                weather::RainParams& p = config.augment.rain;
                read_if_present(rain, "drops_min", p.drops_min);
                read_if_present(rain, "drops_max", p.drops_max);
                read_if_present(rain, "length_min", p.length_min);
                read_if_present(rain, "length_max", p.length_max);
                read_if_present(rain, "angle_min", p.angle_min);
                read_if_present(rain, "angle_max", p.angle_max);
                read_if_present(rain, "brightness", p.drop_brightness);
                read_if_present(rain, "alpha", p.drop_alpha);
                read_if_present(rain, "blur_length", p.blur_length);
                read_if_present(rain, "blur_angle", p.blur_angle);
            }
        }
    } catch (const json::exception& e) {
        throw ParamError("bad config field: " + std::string(e.what()));
    }

    // validate the pieces the library will not see until later
    if (config.folds < 2) throw ParamError("folds must be >= 2");
    if (!(config.split_fraction > 0.0) || !(config.split_fraction < 1.0)) {
        throw ParamError("split_fraction must lie strictly between 0 and 1");
    }
    if (config.c_grid.empty()) throw ParamError("c_grid must not be empty");
    for (double c : config.c_grid) {
        if (!(c > 0.0)) throw ParamError("every C must be > 0");
    }
    if (!(config.canny_low >= 0.0) || !(config.canny_low < config.canny_high)) {
        throw ParamError("canny thresholds require 0 <= low < high");
    }
    return config;
}

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WEATHER_JOBS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}
