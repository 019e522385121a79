#include "weather/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "weather/csv.hpp"
#include "weather/labels.hpp"

namespace weather {

std::vector<std::string> LabeledDataset::distinct_labels() const {
    std::set<std::string> seen(y.begin(), y.end());
    return {seen.begin(), seen.end()};
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& indices) const {
    LabeledDataset out;
    out.x.reserve(indices.size());
    out.y.reserve(indices.size());
    out.paths.reserve(indices.size());
    for (std::size_t i : indices) {
        out.x.push_back(x[i]);
        out.y.push_back(y[i]);
        out.paths.push_back(paths[i]);
    }
    return out;
}

void write_feature_csv(const std::filesystem::path& path, const LabeledDataset& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());

    for (int i = 0; i < kFeatureCount; ++i) {
        out << kFeatureSchema[static_cast<std::size_t>(i)] << ',';
    }
    out << "label,path\n";

    char buf[32];
    for (std::size_t row = 0; row < data.n(); ++row) {
        for (int i = 0; i < kFeatureCount; ++i) {
            std::snprintf(buf, sizeof(buf), "%.9g", data.x[row][static_cast<std::size_t>(i)]);
            out << buf << ',';
        }
        out << data.y[row] << ',' << csv_escape(data.paths[row]) << '\n';
    }
    if (!out.good()) throw IoError("failed writing " + path.string());
}

LabeledDataset read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw CsvError(path.string() + ":1: empty feature csv");

    const std::vector<std::string> header = csv_split(line);
    if (header.size() != kFeatureCount + 2) {
        throw CsvError(path.string() + ":1: expected " + std::to_string(kFeatureCount + 2) +
                       " columns, got " + std::to_string(header.size()));
    }
    for (int i = 0; i < kFeatureCount; ++i) {
        if (header[static_cast<std::size_t>(i)] != kFeatureSchema[static_cast<std::size_t>(i)]) {
            throw CsvError(path.string() + ":1: column " + std::to_string(i + 1) +
                           " should be '" +
                           std::string(kFeatureSchema[static_cast<std::size_t>(i)]) + "', got '" +
                           header[static_cast<std::size_t>(i)] + "'");
        }
    }
    if (header[kFeatureCount] != "label" || header[kFeatureCount + 1] != "path") {
        throw CsvError(path.string() + ":1: trailing columns must be 'label,path'");
    }

    LabeledDataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::vector<std::string> fields = csv_split(line);
        if (fields.size() != kFeatureCount + 2) {
            throw CsvError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(kFeatureCount + 2) + " fields, got " +
                           std::to_string(fields.size()));
        }

        std::array<double, kFeatureCount> row{};
        for (int i = 0; i < kFeatureCount; ++i) {
            const std::string& field = fields[static_cast<std::size_t>(i)];
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == field.c_str() || *end != '\0' || !std::isfinite(v)) {
                throw CsvError(path.string() + ":" + std::to_string(line_no) +
                               ": bad numeric value '" + field + "'");
            }
            row[static_cast<std::size_t>(i)] = v;
        }
        const std::string& label = fields[kFeatureCount];
        if (!is_canonical_label(label)) {
            throw CsvError(path.string() + ":" + std::to_string(line_no) + ": unknown label '" +
                           label + "'");
        }
        data.x.push_back(row);
        data.y.push_back(label);
        data.paths.push_back(fields[kFeatureCount + 1]);
    }
    return data;
}

namespace {

bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}  // namespace

std::vector<CorpusEntry> scan_corpus(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) {
        throw IoError("corpus directory does not exist: " + root.string());
    }

    std::vector<CorpusEntry> entries;
    bool any_class_dir = false;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string label = entry.path().filename().string();
        if (!is_canonical_label(label)) {
            throw ParamError("unexpected class directory '" + label + "' (valid: clear, haze, low_light, rain)");
        }
        any_class_dir = true;
        for (const auto& file : std::filesystem::directory_iterator(entry.path())) {
            if (file.is_regular_file() && has_image_extension(file.path())) {
                entries.push_back({file.path(), label});
            }
        }
    }
    if (!any_class_dir) {
        throw ParamError("no class directories under " + root.string());
    }
    std::sort(entries.begin(), entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
    return entries;
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("directory does not exist: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace weather
