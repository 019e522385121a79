#include "weather/bench.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "weather/random.hpp"
#include "weather/threading.hpp"

namespace weather {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BenchmarkReport benchmark_inference(const WeatherModel& model,
                                    const std::vector<ImageRgb8>& images, int iterations,
                                    int threads) {
    if (images.empty()) throw ParamError("benchmark requires at least one image");
    if (iterations < 2) throw ParamError("benchmark needs >= 2 iterations (first is warmup)");

    std::map<std::pair<int, int>, std::vector<const ImageRgb8*>> by_size;
    for (const ImageRgb8& img : images) by_size[{img.width, img.height}].push_back(&img);

    BenchmarkReport report;
    report.iterations = iterations;
    report.threads = threads;

    volatile double sink = 0.0;  // keep the optimizer honest
    for (const auto& [size, group] : by_size) {
        BenchmarkReport::SizeBucket bucket;
        bucket.width = size.first;
        bucket.height = size.second;
        bucket.images = group.size();

        double extract_time = 0.0;
        double full_time = 0.0;
        double full_mt_time = 0.0;
        for (int it = 0; it < iterations; ++it) {
            auto t0 = Clock::now();
            for (const ImageRgb8* img : group) {
                const FeatureVector fv = extract_features(*img);
                sink = sink + fv[0];
            }
            const double te = seconds_since(t0);

            t0 = Clock::now();
            for (const ImageRgb8* img : group) {
                const FeatureVector fv = extract_features(*img);
                sink = sink + static_cast<double>(predict(model, fv).size());
            }
            const double tf = seconds_since(t0);

            t0 = Clock::now();
            parallel_for(group.size(), threads, [&](std::size_t i) {
                const FeatureVector fv = extract_features(*group[i]);
                predict(model, fv);
            });
            const double tm = seconds_since(t0);

            if (it > 0) {  // warmup excluded
                extract_time += te;
                full_time += tf;
                full_mt_time += tm;
            }
        }

        const double runs = static_cast<double>(group.size()) * (iterations - 1);
        bucket.extract_per_sec_1t = runs / extract_time;
        bucket.extract_predict_per_sec_1t = runs / full_time;
        bucket.extract_predict_per_sec_mt = runs / full_mt_time;
        report.buckets.push_back(bucket);
    }

    // Prediction-only throughput on synthetic standardized-scale features.
    {
        RandomStream rng(7);
        std::vector<FeatureVector> rows(4096);
        for (FeatureVector& fv : rows) {
            for (double& v : fv.values) v = rng.uniform(-3.0, 3.0);
        }
        std::size_t predictions = 0;
        const auto t0 = Clock::now();
        double elapsed = 0.0;
        while (elapsed < 0.25) {
            for (const FeatureVector& fv : rows) sink = sink + static_cast<double>(predict(model, fv).size());
            predictions += rows.size();
            elapsed = seconds_since(t0);
        }
        report.predict_only_per_sec = static_cast<double>(predictions) / elapsed;
    }
    return report;
}

std::string format_benchmark_table(const BenchmarkReport& report) {
    std::ostringstream out;
    char line[200];
    std::snprintf(line, sizeof(line), "%-12s %8s %14s %18s %18s\n", "Size", "Images",
                  "extract/s (1t)", "extract+pred (1t)", "extract+pred (mt)");
    out << line;
    for (const auto& b : report.buckets) {
        char dims[32];
        std::snprintf(dims, sizeof(dims), "%dx%d", b.width, b.height);
        std::snprintf(line, sizeof(line), "%-12s %8zu %14.1f %18.1f %18.1f\n", dims, b.images,
                      b.extract_per_sec_1t, b.extract_predict_per_sec_1t,
                      b.extract_predict_per_sec_mt);
        out << line;
    }
    std::snprintf(line, sizeof(line),
                  "Prediction-only: %.0f/s; %d iterations (1 warmup), %d worker threads\n",
                  report.predict_only_per_sec, report.iterations, report.threads);
    out << line;
    return out.str();
}

}  // namespace weather
