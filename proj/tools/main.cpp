// weather: synthetic weather corpora, 20-feature extraction, linear SVM
// training and evaluation from the command line.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "weather/bench.hpp"
#include "weather/dataset.hpp"
#include "weather/eval.hpp"
#include "weather/image_io.hpp"
#include "weather/model_io.hpp"
#include "weather/svm.hpp"
#include "weather/threading.hpp"

namespace {

using namespace weather;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

RunConfig make_config(const std::string& config_path) {
    if (config_path.empty()) return RunConfig{};
    return load_run_config(config_path);
}

std::vector<Condition> parse_conditions(const std::string& list) {
    std::vector<Condition> out;
    std::string token;
    std::stringstream stream(list);
    while (std::getline(stream, token, ',')) {
        if (token == "haze") out.push_back(Condition::haze);
        else if (token == "low_light") out.push_back(Condition::low_light);
        else if (token == "rain") out.push_back(Condition::rain);
        else if (!token.empty()) throw ParamError("unknown condition '" + token + "'");
    }
    if (out.empty()) throw ParamError("no conditions requested");
    return out;
}

int cmd_augment(const std::string& input, const std::string& output,
                const std::string& conditions, std::uint64_t seed, int jobs,
                const RunConfig& config) {
    const CorpusManifest manifest = synthesize_corpus(
        input, output, parse_conditions(conditions), seed, config.augment, resolve_jobs(jobs));
    std::cout << "wrote " << manifest.rows.size() << " images under " << output << "\n";
    return kExitOk;
}

int cmd_extract(const std::string& input, const std::string& output, int jobs,
                const RunConfig& config) {
    const std::vector<CorpusEntry> entries = scan_corpus(input);

    ExtractionConfig extraction;
    extraction.canny_low = config.canny_low;
    extraction.canny_high = config.canny_high;
    extraction.color_mode = config.color_mode;

    std::vector<std::optional<std::array<double, kFeatureCount>>> rows(entries.size());
    std::atomic<std::size_t> skipped{0};
    parallel_for(entries.size(), resolve_jobs(jobs), [&](std::size_t i) {
        try {
            rows[i] = extract_features(load_image(entries[i].path), extraction).values;
        } catch (const Error& e) {
            std::cerr << "warning: skipping " << entries[i].path.string() << ": " << e.what()
                      << "\n";
            skipped.fetch_add(1);
        }
    });

    LabeledDataset data;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!rows[i]) continue;
        data.x.push_back(*rows[i]);
        data.y.push_back(entries[i].label);
        data.paths.push_back(entries[i].path.string());
    }
    if (data.n() == 0) throw ParamError("no readable images in " + input);

    write_feature_csv(output, data);
    std::cout << "extracted " << data.n() << " rows";
    if (skipped > 0) std::cout << " (" << skipped.load() << " skipped)";
    std::cout << " -> " << output << "\n";
    return kExitOk;
}

int cmd_train(const std::string& features, const std::string& model_out,
              const std::string& c_grid_arg, int folds, double split, std::uint64_t seed,
              const RunConfig& config) {
    std::vector<double> c_grid = config.c_grid;
    if (!c_grid_arg.empty()) {
        c_grid.clear();
        std::string token;
        std::stringstream stream(c_grid_arg);
        while (std::getline(stream, token, ',')) {
            if (token.empty()) continue;
            char* end = nullptr;
            const double c = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0' || !(c > 0.0)) {
                throw ParamError("bad C value '" + token + "'");
            }
            c_grid.push_back(c);
        }
        if (c_grid.empty()) throw ParamError("empty C grid");
    }

    const LabeledDataset data = read_feature_csv(features);
    const auto [train, test] = split_train_test(data, split, seed);
    std::cout << "train/test split: " << train.n() << "/" << test.n() << " rows\n";

    const GridSearchResult search = grid_search_cv(train, c_grid, folds, seed);
    std::cout << "cross-validation (" << folds << " folds):\n";
    for (const auto& [c, acc] : search.table) {
        std::printf("  C=%-8g mean accuracy %.4f\n", c, acc);
    }
    std::cout << "best C: " << search.best_c << "\n";

    WeatherModel model = train_ovr(train, search.best_c);
    model.cv_table = search.table;
    model.train_seed = seed;
    model.folds = folds;

    const std::vector<std::string> pred = predict_all(model, test);
    const MetricsReport report = metrics(confusion(test.y, pred, model.classes));
    std::cout << "hold-out metrics:\n" << format_metrics_table(report);

    save_model(model_out, model);
    std::cout << "model -> " << model_out << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& features,
                 const std::string& report_out) {
    const WeatherModel model = load_model(model_path);
    const LabeledDataset data = read_feature_csv(features);
    if (data.n() == 0) throw ParamError("feature csv has no rows: " + features);

    const std::vector<std::string> pred = predict_all(model, data);
    const MetricsReport report = metrics(confusion(data.y, pred, model.classes));
    std::cout << format_metrics_table(report);
    if (!report_out.empty()) {
        write_metrics_json(report_out, report);
        std::cout << "report -> " << report_out << "\n";
    }
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& image_path, bool scores,
                const RunConfig& config) {
    const WeatherModel model = load_model(model_path);

    ExtractionConfig extraction;
    extraction.canny_low = config.canny_low;
    extraction.canny_high = config.canny_high;
    extraction.color_mode = config.color_mode;

    const FeatureVector fv = extract_features(load_image(image_path), extraction);
    std::cout << predict(model, fv) << "\n";
    if (scores) {
        const std::vector<double> s = decision_scores(model, fv);
        for (std::size_t k = 0; k < model.classes.size(); ++k) {
            std::printf("%s:%.9g\n", model.classes[k].c_str(), s[k]);
        }
    }
    return kExitOk;
}

int cmd_importance(const std::string& model_path, const std::string& features, int repeats,
                   std::uint64_t seed, const std::string& report_out) {
    const WeatherModel model = load_model(model_path);
    const LabeledDataset data = read_feature_csv(features);
    const ImportanceReport report = permutation_importance(model, data, repeats, seed);
    std::cout << format_importance_table(report);
    if (!report_out.empty()) {
        write_importance_json(report_out, report);
        std::cout << "report -> " << report_out << "\n";
    }
    return kExitOk;
}

int cmd_bench(const std::string& model_path, const std::string& input, int iterations, int jobs) {
    const WeatherModel model = load_model(model_path);
    const std::vector<std::filesystem::path> paths = list_images(input);
    if (paths.empty()) throw ParamError("no images under " + input);

    std::vector<ImageRgb8> images;
    for (const auto& path : paths) {
        try {
            images.push_back(load_image(path));
        } catch (const Error& e) {
            std::cerr << "warning: skipping " << path.string() << ": " << e.what() << "\n";
        }
    }
    if (images.empty()) throw ParamError("no decodable images under " + input);

    const BenchmarkReport report =
        benchmark_inference(model, images, iterations, resolve_jobs(jobs));
    std::cout << format_benchmark_table(report);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weather condition classification pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();

    // augment
    auto* augment = app.add_subcommand("augment", "synthesize weather variants of clear images");
    std::string aug_input, aug_output;
    std::string conditions = "haze,low_light,rain";
    std::uint64_t aug_seed = 42;
    int aug_jobs = 0;
    augment->add_option("--input", aug_input, "directory of clear images")->required();
    augment->add_option("--output", aug_output, "corpus output directory")->required();
    augment->add_option("--conditions", conditions, "comma list of haze,low_light,rain");
    augment->add_option("--seed", aug_seed, "corpus seed");
    augment->add_option("--jobs", aug_jobs, "worker threads");

    // extract
    auto* extract = app.add_subcommand("extract", "compute feature csv from a labeled corpus");
    std::string ext_input, ext_output;
    int ext_jobs = 0;
    std::string color_mode;
    extract->add_option("--input", ext_input, "corpus root (directory per class)")->required();
    extract->add_option("--output", ext_output, "feature csv path")->required();
    extract->add_option("--jobs", ext_jobs, "worker threads");
    extract->add_option("--color-mode", color_mode, "intensity|literal");

    // train
    auto* train = app.add_subcommand("train", "grid-search, train and evaluate a model");
    std::string train_features, train_model, c_grid_arg;
    int folds = 0;
    double split = 0.0;
    std::uint64_t train_seed = 42;
    train->add_option("--features", train_features, "feature csv")->required();
    train->add_option("--model", train_model, "output model json")->required();
    train->add_option("--c-grid", c_grid_arg, "comma list of C values");
    train->add_option("--folds", folds, "cross-validation folds");
    train->add_option("--split", split, "train fraction (0,1)");
    train->add_option("--seed", train_seed, "split/fold seed");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a model against a feature csv");
    std::string eval_model, eval_features, eval_report;
    evaluate->add_option("--model", eval_model, "model json")->required();
    evaluate->add_option("--features", eval_features, "feature csv")->required();
    evaluate->add_option("--report", eval_report, "metrics report json");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "classify one image");
    std::string pred_model, pred_image;
    bool pred_scores = false;
    predict_cmd->add_option("--model", pred_model, "model json")->required();
    predict_cmd->add_option("--image", pred_image, "image path")->required();
    predict_cmd->add_flag("--scores", pred_scores, "print per-class scores");

    // importance
    auto* importance = app.add_subcommand("importance", "permutation feature importance");
    std::string imp_model, imp_features, imp_report;
    int repeats = 10;
    std::uint64_t imp_seed = 42;
    importance->add_option("--model", imp_model, "model json")->required();
    importance->add_option("--features", imp_features, "feature csv")->required();
    importance->add_option("--repeats", repeats, "shuffles per feature");
    importance->add_option("--seed", imp_seed, "shuffle seed");
    importance->add_option("--report", imp_report, "importance report json");

    // bench
    auto* bench = app.add_subcommand("bench", "inference throughput measurements");
    std::string bench_model, bench_input;
    int iterations = 3;
    int bench_jobs = 0;
    bench->add_option("--model", bench_model, "model json")->required();
    bench->add_option("--input", bench_input, "directory of images")->required();
    bench->add_option("--iterations", iterations, "timing iterations (first is warmup)");
    bench->add_option("--jobs", bench_jobs, "worker threads for the parallel pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config = make_config(config_path);
        if (!color_mode.empty()) {
            if (color_mode == "intensity") config.color_mode = ColorStatMode::intensity;
            else if (color_mode == "literal") config.color_mode = ColorStatMode::literal;
            else throw ParamError("unknown color mode '" + color_mode + "'");
        }
        if (folds == 0) folds = config.folds;
        if (split == 0.0) split = config.split_fraction;

        if (*augment) return cmd_augment(aug_input, aug_output, conditions, aug_seed, aug_jobs, config);
        if (*extract) return cmd_extract(ext_input, ext_output, ext_jobs, config);
        if (*train) return cmd_train(train_features, train_model, c_grid_arg, folds, split,
                                     train_seed, config);
        if (*evaluate) return cmd_evaluate(eval_model, eval_features, eval_report);
        if (*predict_cmd) return cmd_predict(pred_model, pred_image, pred_scores, config);
        if (*importance) return cmd_importance(imp_model, imp_features, repeats, imp_seed, imp_report);
        if (*bench) return cmd_bench(bench_model, bench_input, iterations, bench_jobs);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
