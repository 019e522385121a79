#pragma once

#include "weather/eval.hpp"

namespace weather {

// Wall-clock throughput of the inference path on pre-decoded images, grouped
// by image size. Iteration 0 is warmup and excluded from the numbers.
struct BenchmarkReport {
    struct SizeBucket {
        int width = 0;
        int height = 0;
        std::size_t images = 0;
        double extract_per_sec_1t = 0.0;
        double extract_predict_per_sec_1t = 0.0;
        double extract_predict_per_sec_mt = 0.0;
    };
    std::vector<SizeBucket> buckets;
    double predict_only_per_sec = 0.0;  // precomputed features, single thread
    int iterations = 0;
    int threads = 1;
};

BenchmarkReport benchmark_inference(const WeatherModel& model,
                                    const std::vector<ImageRgb8>& images, int iterations = 3,
                                    int threads = 1);

std::string format_benchmark_table(const BenchmarkReport& report);

}  // namespace weather
