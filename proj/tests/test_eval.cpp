#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "support/synth_scenes.hpp"
#include "weather/bench.hpp"
#include "weather/eval.hpp"
#include "weather/random.hpp"

using namespace weather;

namespace {

const std::vector<std::string> kClasses = {"clear", "haze", "low_light", "rain"};

LabeledDataset single_informative_feature_dataset(int per_class, std::uint64_t seed) {
    RandomStream rng(seed);
    LabeledDataset data;
    for (int cls = 0; cls < 4; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            std::array<double, kFeatureCount> row{};
            for (int j = 0; j < kFeatureCount; ++j) {
                row[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0);
            }
            row[5] = cls * 10.0 + rng.uniform(-1.0, 1.0);  // the only signal
            data.x.push_back(row);
            data.y.push_back(kClasses[static_cast<std::size_t>(cls)]);
            data.paths.push_back("synthetic");
        }
    }
    return data;
}

}  // namespace

TEST_CASE("confusion matrix counting") {
    const ConfusionMatrix cm = confusion({"clear", "clear", "haze"}, {"clear", "haze", "haze"},
                                         {"clear", "haze"});
    CHECK(cm.counts[0][0] == 1);
    CHECK(cm.counts[0][1] == 1);
    CHECK(cm.counts[1][0] == 0);
    CHECK(cm.counts[1][1] == 1);
    CHECK(cm.total() == 3);

    const ConfusionMatrix perfect =
        confusion({"clear", "haze", "rain"}, {"clear", "haze", "rain"}, kClasses);
    for (std::size_t i = 0; i < kClasses.size(); ++i)
        for (std::size_t j = 0; j < kClasses.size(); ++j)
            if (i != j) CHECK(perfect.counts[i][j] == 0);

    CHECK_THROWS_AS(confusion({}, {}, kClasses), ParamError);
    CHECK_THROWS_AS(confusion({"clear"}, {"clear", "haze"}, kClasses), ParamError);
    CHECK_THROWS_AS(confusion({"fog"}, {"clear"}, kClasses), ParamError);
}

TEST_CASE("binary counts read off the matrix") {
    ConfusionMatrix cm;
    cm.classes = {"a", "b"};
    cm.counts = {{90, 50}, {10, 850}};
    const BinaryCounts bc = binary_counts(cm, "a");
    CHECK(bc.tp == 90);
    CHECK(bc.fn == 50);
    CHECK(bc.fp == 10);
    CHECK(bc.tn == 850);

    const ConfusionMatrix diag = confusion({"clear", "haze"}, {"clear", "haze"}, kClasses);
    for (const auto& cls : kClasses) {
        const BinaryCounts d = binary_counts(diag, cls);
        CHECK(d.fp == 0);
        CHECK(d.fn == 0);
    }
    CHECK_THROWS_AS(binary_counts(cm, "zzz"), ParamError);
}

TEST_CASE("binary counts equal a per-sample recount on random data") {
    RandomStream rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        std::vector<std::string> y_true, y_pred;
        for (int i = 0; i < n; ++i) {
            y_true.push_back(kClasses[static_cast<std::size_t>(rng.uniform_int(0, 3))]);
            y_pred.push_back(kClasses[static_cast<std::size_t>(rng.uniform_int(0, 3))]);
        }
        const ConfusionMatrix cm = confusion(y_true, y_pred, kClasses);
        for (const auto& cls : kClasses) {
            const BinaryCounts bc = binary_counts(cm, cls);
            std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
            for (int i = 0; i < n; ++i) {
                const bool a = y_true[static_cast<std::size_t>(i)] == cls;
                const bool p = y_pred[static_cast<std::size_t>(i)] == cls;
                tp += a && p;
                tn += !a && !p;
                fp += !a && p;
                fn += a && !p;
            }
            CHECK(bc.tp == tp);
            CHECK(bc.tn == tn);
            CHECK(bc.fp == fp);
            CHECK(bc.fn == fn);
        }
    }
}

TEST_CASE("metrics worked example") {
    ConfusionMatrix cm;
    cm.classes = {"a", "b"};
    cm.counts = {{90, 50}, {10, 850}};
    const MetricsReport report = metrics(cm);
    CHECK(report.per_class[0].accuracy == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(report.per_class[0].precision == doctest::Approx(0.90).epsilon(1e-12));
    CHECK(report.per_class[0].recall == doctest::Approx(90.0 / 140.0).epsilon(1e-12));
    CHECK(report.per_class[0].f1 == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("perfect predictions score 1 everywhere") {
    std::vector<std::string> labels;
    for (const auto& cls : kClasses)
        for (int i = 0; i < 5; ++i) labels.push_back(cls);
    const MetricsReport report = metrics(confusion(labels, labels, kClasses));
    for (const ClassMetrics& m : report.per_class) {
        CHECK(m.accuracy == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(!m.zero_division);
    }
    CHECK(report.macro.f1 == 1.0);
    CHECK(report.overall_accuracy == 1.0);
}

TEST_CASE("metrics equal the per-sample oracle on 1000 random label sets") {
    RandomStream rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = static_cast<int>(rng.uniform_int(2, 4));
        const std::vector<std::string> classes(kClasses.begin(), kClasses.begin() + k);
        const int n = static_cast<int>(rng.uniform_int(1, 30));
        std::vector<std::string> y_true, y_pred;
        for (int i = 0; i < n; ++i) {
            y_true.push_back(classes[static_cast<std::size_t>(rng.uniform_int(0, k - 1))]);
            y_pred.push_back(classes[static_cast<std::size_t>(rng.uniform_int(0, k - 1))]);
        }

        const MetricsReport report = metrics(confusion(y_true, y_pred, classes));

        double macro_acc = 0, macro_prec = 0, macro_rec = 0, macro_f1 = 0;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto ref = oracle::class_metrics_reference(y_true, y_pred, classes[c]);
            CHECK(std::abs(report.per_class[c].accuracy - ref.accuracy) <= 1e-12);
            CHECK(std::abs(report.per_class[c].precision - ref.precision) <= 1e-12);
            CHECK(std::abs(report.per_class[c].recall - ref.recall) <= 1e-12);
            CHECK(std::abs(report.per_class[c].f1 - ref.f1) <= 1e-12);
            macro_acc += ref.accuracy;
            macro_prec += ref.precision;
            macro_rec += ref.recall;
            macro_f1 += ref.f1;
        }
        const double kf = static_cast<double>(classes.size());
        CHECK(std::abs(report.macro.accuracy - macro_acc / kf) <= 1e-12);
        CHECK(std::abs(report.macro.precision - macro_prec / kf) <= 1e-12);
        CHECK(std::abs(report.macro.recall - macro_rec / kf) <= 1e-12);
        CHECK(std::abs(report.macro.f1 - macro_f1 / kf) <= 1e-12);

        std::int64_t correct = 0;
        for (int i = 0; i < n; ++i) {
            if (y_true[static_cast<std::size_t>(i)] == y_pred[static_cast<std::size_t>(i)])
                ++correct;
        }
        CHECK(report.overall_accuracy ==
              doctest::Approx(static_cast<double>(correct) / n).epsilon(1e-12));

        // macro F1 bracketed by the per-class extremes
        double lo = 2.0, hi = -1.0;
        for (const auto& m : report.per_class) {
            lo = std::min(lo, m.f1);
            hi = std::max(hi, m.f1);
        }
        CHECK(report.macro.f1 >= lo - 1e-12);
        CHECK(report.macro.f1 <= hi + 1e-12);
    }
}

TEST_CASE("zero-denominator metrics flag instead of NaN") {
    // class 'haze' never predicted, class 'rain' absent entirely
    const MetricsReport report =
        metrics(confusion({"clear", "haze"}, {"clear", "clear"}, kClasses));
    const ClassMetrics& rain = report.per_class[3];
    CHECK(rain.zero_division);
    CHECK(rain.precision == 0.0);
    CHECK(rain.recall == 0.0);
    CHECK(rain.f1 == 0.0);
    for (const auto& m : report.per_class) {
        CHECK(std::isfinite(m.precision));
        CHECK(std::isfinite(m.f1));
    }
}

TEST_CASE("metrics are invariant under consistent relabeling") {
    RandomStream rng(7);
    std::vector<std::string> y_true, y_pred;
    for (int i = 0; i < 60; ++i) {
        y_true.push_back(kClasses[static_cast<std::size_t>(rng.uniform_int(0, 3))]);
        y_pred.push_back(kClasses[static_cast<std::size_t>(rng.uniform_int(0, 3))]);
    }
    const MetricsReport base = metrics(confusion(y_true, y_pred, kClasses));

    // swap the names of two classes consistently everywhere
    auto rename = [](std::vector<std::string> labels) {
        for (auto& l : labels) {
            if (l == "clear") l = "rain";
            else if (l == "rain") l = "clear";
        }
        return labels;
    };
    const MetricsReport renamed = metrics(confusion(rename(y_true), rename(y_pred), kClasses));
    CHECK(renamed.cm.total() == base.cm.total());
    CHECK(renamed.overall_accuracy == base.overall_accuracy);
    CHECK(renamed.macro.f1 == doctest::Approx(base.macro.f1).epsilon(1e-12));
    // per-class rows trade places
    CHECK(renamed.per_class[0].f1 == doctest::Approx(base.per_class[3].f1).epsilon(1e-12));
    CHECK(renamed.per_class[3].f1 == doctest::Approx(base.per_class[0].f1).epsilon(1e-12));
}

TEST_CASE("permutation importance of a zero-weight feature is exactly zero") {
    const LabeledDataset data = single_informative_feature_dataset(15, 3);
    WeatherModel model;
    model.scaler.means.assign(kFeatureCount, 0.0);
    model.scaler.stds.assign(kFeatureCount, 1.0);
    model.classes = kClasses;
    for (int cls = 0; cls < 4; ++cls) {
        BinaryLinearSvm m;
        m.weights.assign(kFeatureCount, 0.0);
        m.weights[5] = 1.0;
        m.bias = -(cls * 10.0) - 0.0;  // not meaningful, just nonzero structure
        model.machines.push_back(m);
    }
    const ImportanceReport report = permutation_importance(model, data, 5, 11);
    for (int f = 0; f < kFeatureCount; ++f) {
        if (f == 5) continue;
        CHECK(report.per_feature[static_cast<std::size_t>(f)].mean_drop == 0.0);
        CHECK(report.per_feature[static_cast<std::size_t>(f)].std_drop == 0.0);
    }
}

TEST_CASE("a single informative feature carries all the importance") {
    // Four collinear classes cap the one-vs-rest baseline below 1.0 (the
    // middle classes are not linearly separable from both sides), so the
    // informative column's drop lands at baseline minus chance.
    const LabeledDataset data = single_informative_feature_dataset(120, 8);
    const WeatherModel model = train_ovr(data, 1.0);
    const ImportanceReport report = permutation_importance(model, data, 10, 21);

    const double chance = 0.25;
    CHECK(report.baseline_accuracy > 2 * chance);
    CHECK(std::abs(report.per_feature[5].mean_drop - (report.baseline_accuracy - chance)) <= 0.05);
    for (int f = 0; f < kFeatureCount; ++f) {
        if (f == 5) continue;
        CHECK(report.per_feature[static_cast<std::size_t>(f)].mean_drop <= 0.01);
    }

    // descending table puts the informative feature on top
    const std::string table = format_importance_table(report);
    const std::size_t first_row = table.find('\n') + 1;
    CHECK(table.substr(first_row, 13) == "motion_blur_x");
}

TEST_CASE("two-class variant: drop equals baseline minus chance exactly-ish") {
    RandomStream rng(44);
    LabeledDataset data;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < 120; ++i) {
            std::array<double, kFeatureCount> row{};
            for (int j = 0; j < kFeatureCount; ++j)
                row[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0);
            row[5] = cls * 10.0 + rng.uniform(-1.0, 1.0);
            data.x.push_back(row);
            data.y.push_back(cls == 0 ? "clear" : "rain");
            data.paths.push_back("synthetic");
        }
    }
    const WeatherModel model = train_ovr(data, 1.0);
    const ImportanceReport report = permutation_importance(model, data, 10, 5);
    CHECK(report.baseline_accuracy == 1.0);
    CHECK(std::abs(report.per_feature[5].mean_drop - 0.5) <= 0.05);
}

TEST_CASE("importance is reproducible for a fixed seed") {
    const LabeledDataset data = single_informative_feature_dataset(10, 5);
    const WeatherModel model = train_ovr(data, 1.0);
    const ImportanceReport a = permutation_importance(model, data, 3, 99);
    const ImportanceReport b = permutation_importance(model, data, 3, 99);
    for (std::size_t f = 0; f < a.per_feature.size(); ++f) {
        CHECK(a.per_feature[f].mean_drop == b.per_feature[f].mean_drop);
        CHECK(a.per_feature[f].std_drop == b.per_feature[f].std_drop);
    }
    CHECK_THROWS_AS(permutation_importance(model, data, 0, 1), ParamError);
    CHECK_THROWS_AS(permutation_importance(model, LabeledDataset{}, 3, 1), ParamError);
}

TEST_CASE("throughput scales roughly with pixel count") {
    const LabeledDataset data = single_informative_feature_dataset(10, 5);
    const WeatherModel model = train_ovr(data, 1.0);

    RandomStream rng(6);
    std::vector<ImageRgb8> images;
    for (int i = 0; i < 4; ++i) {
        RandomStream scene = rng.derive(static_cast<std::uint64_t>(i));
        images.push_back(synth::clear_scene(scene, 320, 240));
    }
    for (int i = 0; i < 4; ++i) {
        RandomStream scene = rng.derive(static_cast<std::uint64_t>(100 + i));
        images.push_back(synth::clear_scene(scene, 640, 480));
    }

    const BenchmarkReport report = benchmark_inference(model, images, 3, 1);
    REQUIRE(report.buckets.size() == 2);
    const auto& small = report.buckets[0].width == 320 ? report.buckets[0] : report.buckets[1];
    const auto& large = report.buckets[0].width == 320 ? report.buckets[1] : report.buckets[0];
    CHECK(small.extract_per_sec_1t > 0.0);
    CHECK(large.extract_per_sec_1t > 0.0);

    // 4x the pixels: expect roughly 4x slower. Cache pressure makes the
    // large size run a little worse than the pure pixel ratio on small
    // hosts, so the band is one-sided generous upward.
    const double ratio = small.extract_per_sec_1t / large.extract_per_sec_1t;
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 7.0);

    CHECK_THROWS_AS(benchmark_inference(model, {}, 3, 1), ParamError);
}

TEST_CASE("report files are written and readable") {
    const auto dir = std::filesystem::temp_directory_path() / "weather_eval_tests";
    std::filesystem::create_directories(dir);

    std::vector<std::string> labels;
    for (const auto& cls : kClasses)
        for (int i = 0; i < 3; ++i) labels.push_back(cls);
    const MetricsReport report = metrics(confusion(labels, labels, kClasses));
    write_metrics_json(dir / "metrics.json", report);
    CHECK(std::filesystem::file_size(dir / "metrics.json") > 100);

    const std::string table = format_metrics_table(report);
    CHECK(table.find("Average") != std::string::npos);
    CHECK(table.find("clear") != std::string::npos);

    const LabeledDataset data = single_informative_feature_dataset(10, 5);
    const WeatherModel model = train_ovr(data, 1.0);
    const ImportanceReport imp = permutation_importance(model, data, 2, 1);
    write_importance_json(dir / "importance.json", imp);
    CHECK(std::filesystem::file_size(dir / "importance.json") > 100);
}
