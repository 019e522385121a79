#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "weather/features.hpp"

namespace weather {

// Feature matrix plus labels and source identifiers; the unit of training
// and evaluation.
struct LabeledDataset {
    std::vector<std::array<double, kFeatureCount>> x;
    std::vector<std::string> y;
    std::vector<std::string> paths;

    std::size_t n() const { return x.size(); }

    // Distinct labels in sorted order.
    std::vector<std::string> distinct_labels() const;

    LabeledDataset subset(const std::vector<std::size_t>& indices) const;
};

// Header = 20 schema names + label + path; floats with 9 significant digits.
void write_feature_csv(const std::filesystem::path& path, const LabeledDataset& data);

// Strict parse; throws CsvError naming the offending line on any mismatch.
LabeledDataset read_feature_csv(const std::filesystem::path& path);

// Directory-per-class corpus layout. Subdirectory names must be canonical
// labels; loose files at the root are ignored.
struct CorpusEntry {
    std::filesystem::path path;
    std::string label;
};

// Entries sorted by path. Throws ParamError on a non-canonical subdirectory
// or when no class directory is present.
std::vector<CorpusEntry> scan_corpus(const std::filesystem::path& root);

// Flat listing of image files (by extension) under a directory, sorted.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace weather
