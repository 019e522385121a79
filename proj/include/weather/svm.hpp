#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "weather/dataset.hpp"

namespace weather {

using Matrix = std::vector<std::vector<double>>;

// Per-column population statistics; zero stds are stored as 1 so constant
// features pass through unscaled.
struct Scaler {
    std::vector<double> means;
    std::vector<double> stds;
};

Scaler fit_scaler(const Matrix& x);
Matrix transform(const Scaler& scaler, const Matrix& x);
std::vector<double> transform_row(const Scaler& scaler, const std::vector<double>& row);

struct BinaryLinearSvm {
    std::vector<double> weights;
    double bias = 0.0;
    double c = 1.0;

    double score(const std::vector<double>& x) const {
        double s = bias;
        for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
        return s;
    }
};

// Solver diagnostics; alpha is the dual variable vector, one per sample.
// sweep_objectives holds the dual objective after every sweep (only tracked
// when diagnostics are requested); exact per-coordinate minimization makes
// it non-increasing, which the primal objective is not.
struct TrainDiagnostics {
    std::vector<double> alpha;
    std::vector<double> sweep_objectives;
    int sweeps = 0;
    double max_violation = 0.0;
    bool converged = false;
};

// L2-regularized hinge-loss SVM:
//
//   min_w,b  0.5*||w||^2 + C * sum_i max(0, 1 - y_i*(w.x_i + b))
//
// solved by dual coordinate descent over alpha in [0,C]^n with the bias
// carried as an augmented constant feature of value 1 (reported as b, so b
// picks up a little regularization). Sweeps stop when the largest projected
// gradient violation drops below tol or after max_iter sweeps.
BinaryLinearSvm train_binary(const Matrix& x, const std::vector<int>& y, double c,
                             double tol = 1e-4, int max_iter = 1000,
                             TrainDiagnostics* diagnostics = nullptr);

struct WeatherModel {
    int schema_version = kFeatureSchemaVersion;
    Scaler scaler;
    std::vector<std::string> classes;            // sorted; argmax ties go to the earliest
    std::vector<BinaryLinearSvm> machines;       // parallel to classes, one-vs-rest
    double best_c = 1.0;
    std::vector<std::pair<double, double>> cv_table;  // (C, mean CV accuracy)
    std::uint64_t train_seed = 0;
    int folds = 0;
    std::uint64_t train_rows = 0;
};

// Fits the scaler on the input and one binary machine per class (that class
// positive, rest negative) on standardized features.
WeatherModel train_ovr(const LabeledDataset& data, double c, double tol = 1e-4,
                       int max_iter = 1000);

std::vector<double> decision_scores(const WeatherModel& model, const FeatureVector& x);
std::string predict(const WeatherModel& model, const FeatureVector& x);
std::vector<std::string> predict_all(const WeatherModel& model, const LabeledDataset& data);

// Per-class round-robin fold assignment after a seeded shuffle. Every class
// must have at least k members.
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<std::string>& y, int k,
                                                       std::uint64_t seed);

struct GridSearchResult {
    double best_c = 1.0;
    std::vector<std::pair<double, double>> table;  // ascending C
};

// Mean validation accuracy over k stratified folds per C; the scaler is
// refit inside every fold. Ties resolve to the smaller C.
GridSearchResult grid_search_cv(const LabeledDataset& data, const std::vector<double>& c_grid,
                                int k, std::uint64_t seed);

// Stratified, seeded, disjoint split; per-class train share rounds to the
// nearest integer. fraction must leave both parts nonempty.
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double fraction, std::uint64_t seed);

}  // namespace weather
