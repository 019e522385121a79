#include "weather/svm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "weather/random.hpp"

namespace weather {

Scaler fit_scaler(const Matrix& x) {
    if (x.empty()) throw ParamError("fit_scaler requires at least one row");
    const std::size_t dims = x[0].size();

    Scaler scaler;
    scaler.means.assign(dims, 0.0);
    scaler.stds.assign(dims, 0.0);

    for (const auto& row : x) {
        if (row.size() != dims) throw ParamError("ragged feature matrix");
        for (std::size_t j = 0; j < dims; ++j) scaler.means[j] += row[j];
    }
    for (double& m : scaler.means) m /= static_cast<double>(x.size());

    for (const auto& row : x) {
        for (std::size_t j = 0; j < dims; ++j) {
            const double d = row[j] - scaler.means[j];
            scaler.stds[j] += d * d;
        }
    }
    for (double& s : scaler.stds) {
        s = std::sqrt(s / static_cast<double>(x.size()));
        if (s == 0.0) s = 1.0;  // constant-feature guard
    }
    return scaler;
}

std::vector<double> transform_row(const Scaler& scaler, const std::vector<double>& row) {
    if (row.size() != scaler.means.size()) {
        throw ParamError("row width does not match scaler dimensions");
    }
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] = (row[j] - scaler.means[j]) / scaler.stds[j];
    }
    return out;
}

Matrix transform(const Scaler& scaler, const Matrix& x) {
    Matrix out;
    out.reserve(x.size());
    for (const auto& row : x) out.push_back(transform_row(scaler, row));
    return out;
}

BinaryLinearSvm train_binary(const Matrix& x, const std::vector<int>& y, double c, double tol,
                             int max_iter, TrainDiagnostics* diagnostics) {
    if (x.empty() || x.size() != y.size()) throw ParamError("bad training matrix");
    if (!(c > 0.0)) throw ParamError("C must be > 0");

    const std::size_t n = x.size();
    const std::size_t dims = x[0].size();

    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == 1) has_pos = true;
        else if (y[i] == -1) has_neg = true;
        else throw ParamError("labels must be +1/-1");
        if (x[i].size() != dims) throw ParamError("ragged feature matrix");
        for (double v : x[i]) {
            if (!std::isfinite(v)) throw ParamError("non-finite feature value");
        }
    }
    if (!has_pos || !has_neg) throw ParamError("training data contains a single class");
    if (diagnostics) *diagnostics = TrainDiagnostics{};

    // Augmented weight vector; the last entry is the bias.
    std::vector<double> w(dims + 1, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        double q = 1.0;  // constant bias feature
        for (double v : x[i]) q += v * v;
        q_diag[i] = q;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    RandomStream shuffle_stream(0x5bd1e995u);  // fixed: training is deterministic

    // 0.5*||w_aug||^2 - sum(alpha); w_aug carries alpha^T Q alpha implicitly.
    auto dual_objective = [&] {
        double obj = 0.0;
        for (std::size_t j = 0; j <= dims; ++j) obj += 0.5 * w[j] * w[j];
        for (std::size_t i = 0; i < n; ++i) obj -= alpha[i];
        return obj;
    };

    int sweep = 0;
    double violation = 0.0;
    bool converged = false;

    for (sweep = 1; sweep <= max_iter; ++sweep) {
        shuffle_stream.shuffle(order);
        violation = 0.0;

        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t i = order[s];
            const std::vector<double>& xi = x[i];
            const double yi = y[i];

            double g = w[dims];
            for (std::size_t j = 0; j < dims; ++j) g += w[j] * xi[j];
            g = g * yi - 1.0;

            double pg = g;
            if (alpha[i] <= 0.0 && g >= 0.0) pg = 0.0;
            else if (alpha[i] >= c && g <= 0.0) pg = 0.0;
            violation = std::max(violation, std::abs(pg));

            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::clamp(alpha[i] - g / q_diag[i], 0.0, c);
                const double delta = (alpha[i] - old) * yi;
                for (std::size_t j = 0; j < dims; ++j) w[j] += delta * xi[j];
                w[dims] += delta;
            }
        }
        if (diagnostics) diagnostics->sweep_objectives.push_back(dual_objective());
        if (violation < tol) {
            converged = true;
            break;
        }
    }

    if (diagnostics) {
        diagnostics->alpha = alpha;
        diagnostics->sweeps = std::min(sweep, max_iter);
        diagnostics->max_violation = violation;
        diagnostics->converged = converged;
    }

    BinaryLinearSvm svm;
    svm.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dims));
    svm.bias = w[dims];
    svm.c = c;
    return svm;
}

namespace {

Matrix dataset_matrix(const LabeledDataset& data) {
    Matrix x;
    x.reserve(data.n());
    for (const auto& row : data.x) x.emplace_back(row.begin(), row.end());
    return x;
}

}  // namespace

WeatherModel train_ovr(const LabeledDataset& data, double c, double tol, int max_iter) {
    if (data.n() < 2) throw ParamError("training requires at least 2 samples");
    const std::vector<std::string> classes = data.distinct_labels();
    if (classes.size() < 2) throw ParamError("training requires at least 2 classes");

    const Matrix raw = dataset_matrix(data);
    WeatherModel model;
    model.scaler = fit_scaler(raw);
    model.classes = classes;
    const Matrix x = transform(model.scaler, raw);

    for (const std::string& cls : classes) {
        std::vector<int> y(data.n());
        for (std::size_t i = 0; i < data.n(); ++i) y[i] = data.y[i] == cls ? 1 : -1;
        model.machines.push_back(train_binary(x, y, c, tol, max_iter));
    }
    model.best_c = c;
    model.train_rows = data.n();
    return model;
}

std::vector<double> decision_scores(const WeatherModel& model, const FeatureVector& x) {
    if (x.schema_version != model.schema_version) {
        throw SchemaError("feature schema version mismatch");
    }
    const std::vector<double> row(x.values.begin(), x.values.end());
    const std::vector<double> standardized = transform_row(model.scaler, row);

    std::vector<double> scores;
    scores.reserve(model.machines.size());
    for (const BinaryLinearSvm& machine : model.machines) {
        scores.push_back(machine.score(standardized));
    }
    return scores;
}

std::string predict(const WeatherModel& model, const FeatureVector& x) {
    const std::vector<double> scores = decision_scores(model, x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
        if (scores[k] > scores[best]) best = k;  // ties keep the earlier class
    }
    return model.classes[best];
}

std::vector<std::string> predict_all(const WeatherModel& model, const LabeledDataset& data) {
    std::vector<std::string> out;
    out.reserve(data.n());
    FeatureVector fv;
    fv.schema_version = model.schema_version;
    for (const auto& row : data.x) {
        fv.values = row;
        out.push_back(predict(model, fv));
    }
    return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<std::string>& y, int k,
                                                       std::uint64_t seed) {
    if (k < 2) throw ParamError("fold count must be >= 2");

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);

    for (const auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw ParamError("class '" + label + "' has " + std::to_string(members.size()) +
                             " members, fewer than " + std::to_string(k) + " folds");
        }
    }

    RandomStream stream(seed);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (auto& [label, members] : by_class) {
        stream.shuffle(members);
        for (std::size_t j = 0; j < members.size(); ++j) {
            folds[j % static_cast<std::size_t>(k)].push_back(members[j]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

GridSearchResult grid_search_cv(const LabeledDataset& data, const std::vector<double>& c_grid,
                                int k, std::uint64_t seed) {
    if (c_grid.empty()) throw ParamError("empty C grid");

    std::vector<double> grid = c_grid;
    std::sort(grid.begin(), grid.end());

    const std::vector<std::vector<std::size_t>> folds = stratified_kfold(data.y, k, seed);

    GridSearchResult result;
    double best_acc = -1.0;
    for (double c : grid) {
        double acc_sum = 0.0;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            std::vector<std::size_t> train_idx;
            for (std::size_t g = 0; g < folds.size(); ++g) {
                if (g == f) continue;
                train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
            }
            const LabeledDataset train = data.subset(train_idx);
            const LabeledDataset val = data.subset(folds[f]);

            const WeatherModel model = train_ovr(train, c);
            const std::vector<std::string> pred = predict_all(model, val);
            std::size_t correct = 0;
            for (std::size_t i = 0; i < val.n(); ++i) {
                if (pred[i] == val.y[i]) ++correct;
            }
            acc_sum += static_cast<double>(correct) / static_cast<double>(val.n());
        }
        const double mean_acc = acc_sum / static_cast<double>(folds.size());
        result.table.emplace_back(c, mean_acc);
        if (mean_acc > best_acc) {
            best_acc = mean_acc;
            result.best_c = c;  // ascending grid, so ties keep the smaller C
        }
    }
    return result;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double fraction, std::uint64_t seed) {
    if (data.n() < 5) throw ParamError("split requires at least 5 samples");
    if (!(fraction > 0.0) || !(fraction < 1.0)) {
        throw ParamError("split fraction must lie strictly between 0 and 1");
    }

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.y.size(); ++i) by_class[data.y[i]].push_back(i);

    RandomStream stream(seed);
    std::vector<std::size_t> train_idx, test_idx;
    for (auto& [label, members] : by_class) {
        stream.shuffle(members);
        const std::size_t n_train =
            static_cast<std::size_t>(std::lround(fraction * static_cast<double>(members.size())));
        for (std::size_t j = 0; j < members.size(); ++j) {
            (j < n_train ? train_idx : test_idx).push_back(members[j]);
        }
    }
    if (train_idx.empty() || test_idx.empty()) {
        throw ParamError("split leaves an empty train or test set");
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {data.subset(train_idx), data.subset(test_idx)};
}

}  // namespace weather
