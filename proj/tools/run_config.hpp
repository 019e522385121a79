#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "weather/augment.hpp"
#include "weather/features.hpp"

// Shared run configuration; every field has the documented default and a
// JSON file can override any subset. Explicit CLI flags win over the file.
struct RunConfig {
    std::uint64_t seed = 42;
    int jobs = 0;  // 0 = WEATHER_JOBS env var, else hardware concurrency
    weather::CorpusParams augment;
    double canny_low = 100.0;
    double canny_high = 200.0;
    weather::ColorStatMode color_mode = weather::ColorStatMode::intensity;
    std::vector<double> c_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
    int folds = 5;
    double split_fraction = 0.8;
};

RunConfig load_run_config(const std::filesystem::path& path);

// Resolves the effective worker count: explicit value, else WEATHER_JOBS,
// else hardware concurrency.
int resolve_jobs(int requested);
