#include "weather/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weather/random.hpp"

namespace weather {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const auto& row : counts)
        for (std::int64_t v : row) sum += v;
    return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& classes) {
    if (y_true.size() != y_pred.size()) throw ParamError("label list length mismatch");
    if (y_true.empty()) throw ParamError("confusion requires at least one sample");
    if (classes.empty()) throw ParamError("confusion requires a class list");

    auto index_of = [&](const std::string& label) {
        for (std::size_t k = 0; k < classes.size(); ++k) {
            if (classes[k] == label) return k;
        }
        throw ParamError("label '" + label + "' not in class list");
    };

    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes.size(), std::vector<std::int64_t>(classes.size(), 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        cm.counts[index_of(y_true[i])][index_of(y_pred[i])] += 1;
    }
    return cm;
}

BinaryCounts binary_counts(const ConfusionMatrix& cm, const std::string& cls) {
    std::size_t k = cm.classes.size();
    for (std::size_t i = 0; i < cm.classes.size(); ++i) {
        if (cm.classes[i] == cls) {
            k = i;
            break;
        }
    }
    if (k == cm.classes.size()) throw ParamError("unknown class '" + cls + "'");

    BinaryCounts out;
    out.tp = cm.counts[k][k];
    for (std::size_t i = 0; i < cm.classes.size(); ++i) {
        out.fp += cm.counts[i][k];
        out.fn += cm.counts[k][i];
    }
    out.fp -= out.tp;
    out.fn -= out.tp;
    out.tn = cm.total() - out.tp - out.fp - out.fn;
    return out;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total < 1) throw ParamError("metrics require at least one sample");

    MetricsReport report;
    report.classes = cm.classes;
    report.cm = cm;
    report.samples = total;

    std::int64_t trace = 0;
    for (std::size_t k = 0; k < cm.classes.size(); ++k) trace += cm.counts[k][k];
    report.overall_accuracy = static_cast<double>(trace) / static_cast<double>(total);

    for (const std::string& cls : cm.classes) {
        const BinaryCounts bc = binary_counts(cm, cls);
        ClassMetrics m;
        m.accuracy = static_cast<double>(bc.tp + bc.tn) / static_cast<double>(total);
        if (bc.tp + bc.fp > 0) {
            m.precision = static_cast<double>(bc.tp) / static_cast<double>(bc.tp + bc.fp);
        } else {
            m.zero_division = true;
        }
        if (bc.tp + bc.fn > 0) {
            m.recall = static_cast<double>(bc.tp) / static_cast<double>(bc.tp + bc.fn);
        } else {
            m.zero_division = true;
        }
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            m.zero_division = true;
        }
        report.per_class.push_back(m);
    }

    const double k = static_cast<double>(report.per_class.size());
    for (const ClassMetrics& m : report.per_class) {
        report.macro.accuracy += m.accuracy / k;
        report.macro.precision += m.precision / k;
        report.macro.recall += m.recall / k;
        report.macro.f1 += m.f1 / k;
        report.macro.zero_division = report.macro.zero_division || m.zero_division;
    }
    return report;
}

ImportanceReport permutation_importance(const WeatherModel& model, const LabeledDataset& data,
                                        int repeats, std::uint64_t seed) {
    if (repeats < 1) throw ParamError("repeats must be >= 1");
    if (data.n() == 0) throw ParamError("importance requires a nonempty dataset");

    auto accuracy_of = [&](const LabeledDataset& d) {
        const std::vector<std::string> pred = predict_all(model, d);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < d.n(); ++i) {
            if (pred[i] == d.y[i]) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(d.n());
    };

    ImportanceReport report;
    report.baseline_accuracy = accuracy_of(data);
    report.repeats = repeats;
    report.seed = seed;

    const RandomStream root(seed);
    LabeledDataset shuffled = data;
    std::vector<std::size_t> perm(data.n());

    for (int f = 0; f < kFeatureCount; ++f) {
        std::vector<double> drops;
        drops.reserve(static_cast<std::size_t>(repeats));
        for (int rep = 0; rep < repeats; ++rep) {
            RandomStream stream =
                root.derive(static_cast<std::uint64_t>(f) * 1000003ull + static_cast<std::uint64_t>(rep));
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            stream.shuffle(perm);
            for (std::size_t i = 0; i < data.n(); ++i) {
                shuffled.x[i][static_cast<std::size_t>(f)] =
                    data.x[perm[i]][static_cast<std::size_t>(f)];
            }
            drops.push_back(report.baseline_accuracy - accuracy_of(shuffled));
        }
        // restore the column
        for (std::size_t i = 0; i < data.n(); ++i) {
            shuffled.x[i][static_cast<std::size_t>(f)] = data.x[i][static_cast<std::size_t>(f)];
        }

        double mean = 0.0;
        for (double d : drops) mean += d;
        mean /= static_cast<double>(drops.size());
        double var = 0.0;
        for (double d : drops) var += (d - mean) * (d - mean);
        var /= static_cast<double>(drops.size());

        report.per_feature.push_back({std::string(kFeatureSchema[static_cast<std::size_t>(f)]),
                                      mean, std::sqrt(var)});
    }
    return report;
}

std::string format_metrics_table(const MetricsReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s %10s\n", "Class", "Accuracy",
                  "Precision", "Recall", "F1");
    out << line;
    for (std::size_t k = 0; k < report.classes.size(); ++k) {
        const ClassMetrics& m = report.per_class[k];
        std::snprintf(line, sizeof(line), "%-12s %10.4f %10.4f %10.4f %10.4f%s\n",
                      report.classes[k].c_str(), m.accuracy, m.precision, m.recall, m.f1,
                      m.zero_division ? "  (zero-division)" : "");
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-12s %10.4f %10.4f %10.4f %10.4f\n", "Average",
                  report.macro.accuracy, report.macro.precision, report.macro.recall,
                  report.macro.f1);
    out << line;
    std::snprintf(line, sizeof(line), "Overall accuracy: %.4f over %lld samples\n",
                  report.overall_accuracy, static_cast<long long>(report.samples));
    out << line;
    return out.str();
}

std::string format_importance_table(const ImportanceReport& report) {
    std::vector<FeatureImportance> sorted = report.per_feature;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const FeatureImportance& a, const FeatureImportance& b) {
                         return a.mean_drop > b.mean_drop;
                     });

    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %12s %12s\n", "Feature", "Importance", "Std");
    out << line;
    for (const FeatureImportance& fi : sorted) {
        std::snprintf(line, sizeof(line), "%-16s %12.6f %12.6f\n", fi.name.c_str(), fi.mean_drop,
                      fi.std_drop);
        out << line;
    }
    std::snprintf(line, sizeof(line), "Baseline accuracy: %.4f (%d repeats)\n",
                  report.baseline_accuracy, report.repeats);
    out << line;
    return out.str();
}

void write_metrics_json(const std::filesystem::path& path, const MetricsReport& report) {
    using nlohmann::json;
    json per_class = json::object();
    for (std::size_t k = 0; k < report.classes.size(); ++k) {
        const ClassMetrics& m = report.per_class[k];
        per_class[report.classes[k]] = {{"accuracy", m.accuracy},
                                        {"precision", m.precision},
                                        {"recall", m.recall},
                                        {"f1", m.f1},
                                        {"zero_division", m.zero_division}};
    }
    const json doc = {{"classes", report.classes},
                      {"per_class", per_class},
                      {"macro", {{"accuracy", report.macro.accuracy},
                                 {"precision", report.macro.precision},
                                 {"recall", report.macro.recall},
                                 {"f1", report.macro.f1}}},
                      {"overall_accuracy", report.overall_accuracy},
                      {"samples", report.samples},
                      {"confusion", report.cm.counts}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out.good()) throw IoError("failed writing report: " + path.string());
}

void write_importance_json(const std::filesystem::path& path, const ImportanceReport& report) {
    using nlohmann::json;
    json features = json::array();
    std::vector<FeatureImportance> sorted = report.per_feature;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const FeatureImportance& a, const FeatureImportance& b) {
                         return a.mean_drop > b.mean_drop;
                     });
    for (const FeatureImportance& fi : sorted) {
        features.push_back({{"feature", fi.name}, {"importance", fi.mean_drop}, {"std", fi.std_drop}});
    }
    const json doc = {{"baseline_accuracy", report.baseline_accuracy},
                      {"repeats", report.repeats},
                      {"seed", report.seed},
                      {"importance", features}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out.good()) throw IoError("failed writing report: " + path.string());
}

}  // namespace weather
