#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "weather/svm.hpp"

namespace weather {

// Rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> counts;

    std::int64_t total() const;
};

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& classes);

struct BinaryCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

// One-vs-rest reduction of the confusion matrix for one class.
BinaryCounts binary_counts(const ConfusionMatrix& cm, const std::string& cls);

struct ClassMetrics {
    double accuracy = 0.0;   // (TP+TN)/total
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_division = false;  // a denominator was 0; the metric reads 0
};

struct MetricsReport {
    std::vector<std::string> classes;
    std::vector<ClassMetrics> per_class;
    ClassMetrics macro;  // unweighted means over classes
    double overall_accuracy = 0.0;
    std::int64_t samples = 0;
    ConfusionMatrix cm;
};

MetricsReport metrics(const ConfusionMatrix& cm);

struct FeatureImportance {
    std::string name;
    double mean_drop = 0.0;  // baseline accuracy minus permuted accuracy
    double std_drop = 0.0;
};

struct ImportanceReport {
    double baseline_accuracy = 0.0;
    int repeats = 0;
    std::uint64_t seed = 0;
    std::vector<FeatureImportance> per_feature;  // schema order
};

// Permutation importance on holdout data: shuffles one raw feature column at
// a time (seeded per feature/repeat), re-predicts, records the accuracy
// drop. The model is never modified.
ImportanceReport permutation_importance(const WeatherModel& model, const LabeledDataset& data,
                                        int repeats = 10, std::uint64_t seed = 42);

// Human-readable tables and JSON report writers.
std::string format_metrics_table(const MetricsReport& report);
std::string format_importance_table(const ImportanceReport& report);
void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report);
void write_importance_json(const std::filesystem::path& path, const ImportanceReport& report);

}  // namespace weather
