#include "fintext/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace fintext {

LinearModel fit_majority(const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("fit_majority: no labels");
    const long positives = std::count(labels.begin(), labels.end(), 1);
    LinearModel m;
    m.kind = LinearKind::majority;
    m.intercept = (2 * positives >= static_cast<long>(labels.size())) ? 1.0 : 0.0;
    return m;
}

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace

LinearModel fit_elastic_net(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                            double rho, bool fit_intercept) {
    if (X.rows == 0 || X.cols == 0) throw std::invalid_argument("fit: empty feature matrix");
    if (static_cast<size_t>(X.rows) != y.size()) {
        throw std::invalid_argument("fit: rows(X) != len(y)");
    }
    if (lambda < 0) throw std::invalid_argument("fit: lambda must be >= 0");
    if (rho < 0 || rho > 1) throw std::invalid_argument("fit: rho must lie in [0,1]");

    const int n = X.rows;
    const int p = X.cols;
    const double inv_n = 1.0 / n;

    // Column-major view for coordinate access.
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<size_t>(p));
    std::vector<double> col_sq(static_cast<size_t>(p), 0.0);  // (1/n) sum x_ij^2
    for (int r = 0; r < n; ++r) {
        for (const auto& [j, v] : X.entries[static_cast<size_t>(r)]) {
            cols[static_cast<size_t>(j)].emplace_back(r, v);
            col_sq[static_cast<size_t>(j)] += v * v * inv_n;
        }
    }

    std::vector<double> w(static_cast<size_t>(p), 0.0);
    double b = 0.0;
    std::vector<double> residual(y);  // y - Xw - b
    if (fit_intercept) {
        b = std::accumulate(y.begin(), y.end(), 0.0) * inv_n;
        for (auto& r : residual) r -= b;
    }

    const double l1 = lambda * rho;
    const double l2 = lambda * (1.0 - rho);
    constexpr double kTol = 1e-8;
    constexpr int kMaxSweeps = 10000;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (int j = 0; j < p; ++j) {
            const auto& col = cols[static_cast<size_t>(j)];
            if (col.empty()) continue;
            const double wj = w[static_cast<size_t>(j)];
            double corr = 0.0;  // (1/n) x_j . (residual + x_j * wj)
            for (const auto& [r, v] : col) corr += v * residual[static_cast<size_t>(r)];
            corr = corr * inv_n + col_sq[static_cast<size_t>(j)] * wj;
            const double wj_new = soft_threshold(corr, l1) / (col_sq[static_cast<size_t>(j)] + l2);
            if (wj_new != wj) {
                const double delta = wj_new - wj;
                for (const auto& [r, v] : col) residual[static_cast<size_t>(r)] -= v * delta;
                w[static_cast<size_t>(j)] = wj_new;
            }
            max_change = std::max(max_change, std::fabs(wj_new - wj));
        }
        if (fit_intercept) {
            double shift = std::accumulate(residual.begin(), residual.end(), 0.0) * inv_n;
            if (shift != 0.0) {
                b += shift;
                for (auto& r : residual) r -= shift;
            }
            max_change = std::max(max_change, std::fabs(shift));
        }
        if (max_change < kTol) break;
    }

    LinearModel m;
    m.kind = rho == 1.0 ? LinearKind::lasso : (rho == 0.0 ? LinearKind::ridge : LinearKind::elastic_net);
    m.weights = std::move(w);
    m.intercept = b;
    m.lambda = lambda;
    m.l1_ratio = rho;
    return m;
}

LinearModel fit_ridge(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                      bool fit_intercept) {
    LinearModel m = fit_elastic_net(X, y, lambda, 0.0, fit_intercept);
    m.kind = LinearKind::ridge;
    return m;
}

LinearModel fit_lasso(const FeatureMatrix& X, const std::vector<double>& y, double lambda,
                      bool fit_intercept) {
    LinearModel m = fit_elastic_net(X, y, lambda, 1.0, fit_intercept);
    m.kind = LinearKind::lasso;
    return m;
}

std::vector<double> predict_linear(const LinearModel& model, const FeatureMatrix& X) {
    std::vector<double> scores(static_cast<size_t>(X.rows), model.intercept);
    if (model.kind == LinearKind::majority) return scores;
    if (static_cast<size_t>(X.cols) != model.weights.size()) {
        throw std::invalid_argument("predict_linear: feature dimension mismatch");
    }
    for (int r = 0; r < X.rows; ++r) {
        double s = model.intercept;
        for (const auto& [j, v] : X.entries[static_cast<size_t>(r)]) {
            s += v * model.weights[static_cast<size_t>(j)];
        }
        scores[static_cast<size_t>(r)] = s;
    }
    return scores;
}

std::vector<int> classify_linear(const LinearModel& model, const FeatureMatrix& X) {
    auto scores = predict_linear(model, X);
    std::vector<int> cls(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) cls[i] = scores[i] > 0.5 ? 1 : 0;
    return cls;
}

namespace {

const char* kind_name(LinearKind k) {
    switch (k) {
        case LinearKind::majority: return "majority";
        case LinearKind::ridge: return "ridge";
        case LinearKind::lasso: return "lasso";
        case LinearKind::elastic_net: return "elastic_net";
    }
    return "?";
}

LinearKind kind_from_name(const std::string& s) {
    if (s == "majority") return LinearKind::majority;
    if (s == "ridge") return LinearKind::ridge;
    if (s == "lasso") return LinearKind::lasso;
    if (s == "elastic_net") return LinearKind::elastic_net;
    throw std::runtime_error("unknown linear model kind '" + s + "'");
}

}  // namespace

std::string linear_model_to_json(const LinearModel& model) {
    nlohmann::json j{{"kind", kind_name(model.kind)},
                     {"lambda", model.lambda},
                     {"l1_ratio", model.l1_ratio},
                     {"intercept", model.intercept},
                     {"weights", model.weights}};
    return j.dump(2);
}

LinearModel linear_model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LinearModel m;
    m.kind = kind_from_name(j.at("kind").get<std::string>());
    m.lambda = j.at("lambda").get<double>();
    m.l1_ratio = j.at("l1_ratio").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    return m;
}

}  // namespace fintext
