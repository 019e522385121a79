#include "weather/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace weather {

using nlohmann::json;

void save_model(const std::filesystem::path& path, const WeatherModel& model) {
    json machines = json::array();
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        machines.push_back({{"class", model.classes[k]},
                            {"weights", model.machines[k].weights},
                            {"bias", model.machines[k].bias}});
    }
    json cv_table = json::array();
    for (const auto& [c, acc] : model.cv_table) cv_table.push_back({c, acc});

    std::vector<std::string> schema;
    for (std::string_view name : kFeatureSchema) schema.emplace_back(name);

    const json doc = {{"format_version", 1},
                      {"feature_schema", schema},
                      {"classes", model.classes},
                      {"scaler", {{"means", model.scaler.means}, {"stds", model.scaler.stds}}},
                      {"machines", machines},
                      {"best_c", model.best_c},
                      {"cv_table", cv_table},
                      {"training", {{"seed", model.train_seed},
                                    {"folds", model.folds},
                                    {"rows", model.train_rows}}}};

    std::ofstream out(path);
    if (!out) throw IoError("cannot write model: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out.good()) throw IoError("failed writing model: " + path.string());
}

WeatherModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model: " + path.string());

    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("model file is not valid json: " + std::string(e.what()));
    }

    try {
        if (doc.at("format_version").get<int>() != 1) {
            throw SchemaError("unsupported model format version");
        }
        const auto schema = doc.at("feature_schema").get<std::vector<std::string>>();
        if (schema.size() != kFeatureCount) {
            throw SchemaError("model feature schema has wrong length");
        }
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (schema[i] != kFeatureSchema[i]) {
                throw SchemaError("model feature schema mismatch at slot " + std::to_string(i));
            }
        }

        WeatherModel model;
        model.classes = doc.at("classes").get<std::vector<std::string>>();
        model.scaler.means = doc.at("scaler").at("means").get<std::vector<double>>();
        model.scaler.stds = doc.at("scaler").at("stds").get<std::vector<double>>();
        if (model.scaler.means.size() != kFeatureCount ||
            model.scaler.stds.size() != kFeatureCount) {
            throw SchemaError("model scaler has wrong dimensions");
        }

        for (const json& entry : doc.at("machines")) {
            BinaryLinearSvm machine;
            machine.weights = entry.at("weights").get<std::vector<double>>();
            machine.bias = entry.at("bias").get<double>();
            machine.c = doc.at("best_c").get<double>();
            if (machine.weights.size() != kFeatureCount) {
                throw SchemaError("machine weight vector has wrong length");
            }
            const std::string cls = entry.at("class").get<std::string>();
            if (model.machines.size() >= model.classes.size() ||
                cls != model.classes[model.machines.size()]) {
                throw SchemaError("machine order does not match class list");
            }
            model.machines.push_back(std::move(machine));
        }
        if (model.machines.size() != model.classes.size() || model.classes.empty()) {
            throw SchemaError("model must carry one machine per class");
        }

        model.best_c = doc.at("best_c").get<double>();
        for (const json& row : doc.at("cv_table")) {
            model.cv_table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        }
        const json& training = doc.at("training");
        model.train_seed = training.at("seed").get<std::uint64_t>();
        model.folds = training.at("folds").get<int>();
        model.train_rows = training.at("rows").get<std::uint64_t>();
        return model;
    } catch (const json::exception& e) {
        throw SchemaError("model file missing required fields: " + std::string(e.what()));
    }
}

}  // namespace weather
