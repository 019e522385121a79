#pragma once

#include <filesystem>

#include "weather/svm.hpp"

namespace weather {

// Model file format 1: JSON with feature schema, classes, scaler, per-class
// machines, best C, CV table and training metadata. Doubles round-trip
// exactly (shortest-representation encoding).
void save_model(const std::filesystem::path& path, const WeatherModel& model);
WeatherModel load_model(const std::filesystem::path& path);

}  // namespace weather
