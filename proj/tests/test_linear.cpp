#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "fintext/linear.hpp"

using namespace fintext;

namespace {

FeatureMatrix dense_to_matrix(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix m;
    m.rows = static_cast<int>(rows.size());
    m.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    for (const auto& row : rows) {
        std::vector<std::pair<int, double>> entries;
        for (int c = 0; c < static_cast<int>(row.size()); ++c) {
            if (row[c] != 0.0) entries.emplace_back(c, row[c]);
        }
        m.entries.push_back(std::move(entries));
    }
    return m;
}

std::vector<std::vector<double>> random_dense(int n, int p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> X(n, std::vector<double>(p));
    for (auto& row : X) {
        for (auto& v : row) v = u(rng);
    }
    return X;
}

double elastic_net_objective(const std::vector<std::vector<double>>& X,
                             const std::vector<double>& y, const std::vector<double>& w,
                             double b, double lambda, double rho) {
    const size_t n = X.size();
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double pred = b;
        for (size_t j = 0; j < w.size(); ++j) pred += X[i][j] * w[j];
        sse += (y[i] - pred) * (y[i] - pred);
    }
    double l1 = 0.0, l2 = 0.0;
    for (double v : w) {
        l1 += std::fabs(v);
        l2 += v * v;
    }
    return sse / (2.0 * static_cast<double>(n)) + lambda * (rho * l1 + (1.0 - rho) / 2.0 * l2);
}

// Independent proximal-gradient (ISTA) minimizer of the same objective.
std::pair<std::vector<double>, double> ista_oracle(const std::vector<std::vector<double>>& X,
                                                   const std::vector<double>& y, double lambda,
                                                   double rho, int iters = 200000,
                                                   double step = 0.05) {
    const size_t n = X.size(), p = X[0].size();
    std::vector<double> w(p, 0.0);
    double b = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> resid(n);
        for (size_t i = 0; i < n; ++i) {
            double pred = b;
            for (size_t j = 0; j < p; ++j) pred += X[i][j] * w[j];
            resid[i] = pred - y[i];
        }
        double gb = 0.0;
        for (size_t i = 0; i < n; ++i) gb += resid[i];
        gb /= static_cast<double>(n);
        b -= step * gb;
        for (size_t j = 0; j < p; ++j) {
            double g = 0.0;
            for (size_t i = 0; i < n; ++i) g += X[i][j] * resid[i];
            g = g / static_cast<double>(n) + lambda * (1.0 - rho) * w[j];
            const double z = w[j] - step * g;
            const double thr = step * lambda * rho;
            w[j] = z > thr ? z - thr : (z < -thr ? z + thr : 0.0);
        }
    }
    return {w, b};
}

}  // namespace

TEST_CASE("fit_majority") {
    const auto mostly_one = fit_majority({1, 1, 1, 0, 0});
    CHECK(mostly_one.intercept == 1.0);
    const auto all_zero = fit_majority({0, 0, 0});
    CHECK(all_zero.intercept == 0.0);
    const auto tie = fit_majority({0, 1, 0, 1});
    CHECK(tie.intercept == 1.0);  // tie goes to class 1

    // Prediction ignores features entirely.
    const auto X = dense_to_matrix({{1.0, 2.0}, {-5.0, 0.0}});
    const auto preds = predict_linear(mostly_one, X);
    CHECK(preds == std::vector<double>{1.0, 1.0});
    CHECK(classify_linear(mostly_one, X) == std::vector<int>{1, 1});
}

TEST_CASE("ridge single-feature closed form") {
    const auto X = dense_to_matrix({{1.0}, {2.0}});
    const std::vector<double> y{1.0, 2.0};
    const auto m = fit_ridge(X, y, 1.0, /*fit_intercept=*/false);
    // w = sum(xy) / (sum(x^2) + n*lambda) = 5/7 under the 1/2n objective.
    CHECK(m.weights[0] == doctest::Approx(5.0 / 7.0).epsilon(1e-8));
    CHECK(m.intercept == 0.0);
}

TEST_CASE("ridge matches the closed form on random instances") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 12, p = 4;
        const auto Xd = random_dense(n, p, rng);
        std::vector<double> y(n);
        for (auto& v : y) v = u(rng);
        const double lambda = trial % 2 ? 0.5 : 0.0;  // includes the OLS limit
        const auto m = fit_ridge(dense_to_matrix(Xd), y, lambda, /*fit_intercept=*/false);

        // Closed form (X'X + n*lambda*I) w = X'y by Gaussian elimination.
        std::vector<std::vector<double>> A(p, std::vector<double>(p + 1, 0.0));
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < p; ++b) {
                for (int i = 0; i < n; ++i) A[a][b] += Xd[i][a] * Xd[i][b];
            }
            A[a][a] += n * lambda;
            for (int i = 0; i < n; ++i) A[a][p] += Xd[i][a] * y[i];
        }
        for (int col = 0; col < p; ++col) {
            int piv = col;
            for (int r = col + 1; r < p; ++r) {
                if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
            }
            std::swap(A[col], A[piv]);
            for (int r = 0; r < p; ++r) {
                if (r == col) continue;
                const double f = A[r][col] / A[col][col];
                for (int c = col; c <= p; ++c) A[r][c] -= f * A[col][c];
            }
        }
        for (int j = 0; j < p; ++j) {
            CHECK(m.weights[j] == doctest::Approx(A[j][p] / A[j][j]).epsilon(1e-6));
        }
    }
}

TEST_CASE("ridge shrinkage limit") {
    std::mt19937_64 rng(2);
    const auto Xd = random_dense(20, 5, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(20);
    for (auto& v : y) v = u(rng);
    const auto m = fit_ridge(dense_to_matrix(Xd), y, 1e9, /*fit_intercept=*/false);
    double norm = 0;
    for (double w : m.weights) norm += w * w;
    CHECK(std::sqrt(norm) < 1e-6);
}

TEST_CASE("lasso KKT all-zero threshold") {
    std::mt19937_64 rng(33);
    const int n = 15, p = 6;
    const auto Xd = random_dense(n, p, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(n);
    for (auto& v : y) v = u(rng);
    double max_corr = 0.0;
    for (int j = 0; j < p; ++j) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += Xd[i][j] * y[i];
        max_corr = std::max(max_corr, std::fabs(c) / n);
    }
    const auto dead = fit_lasso(dense_to_matrix(Xd), y, max_corr * 1.0001,
                                /*fit_intercept=*/false);
    for (double w : dead.weights) CHECK(w == 0.0);
    const auto alive = fit_lasso(dense_to_matrix(Xd), y, max_corr * 0.5,
                                 /*fit_intercept=*/false);
    CHECK(std::any_of(alive.weights.begin(), alive.weights.end(),
                      [](double w) { return w != 0.0; }));
}

TEST_CASE("lasso sparsity is monotone in lambda") {
    std::mt19937_64 rng(44);
    const auto Xd = random_dense(25, 8, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(25);
    for (auto& v : y) v = u(rng);
    const auto X = dense_to_matrix(Xd);
    size_t prev_zeros = 0;
    for (double lambda : {0.001, 0.01, 0.05, 0.1, 0.5, 1.0}) {
        const auto m = fit_lasso(X, y, lambda);
        const size_t zeros = static_cast<size_t>(
            std::count(m.weights.begin(), m.weights.end(), 0.0));
        CHECK(zeros >= prev_zeros);
        prev_zeros = zeros;
    }
}

TEST_CASE("elastic net endpoints and independent minimizer") {
    std::mt19937_64 rng(55);
    const auto Xd = random_dense(5, 3, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(5);
    for (auto& v : y) v = u(rng);
    const auto X = dense_to_matrix(Xd);

    // rho = 0 reduces to ridge.
    const auto en0 = fit_elastic_net(X, y, 0.3, 0.0);
    const auto rid = fit_ridge(X, y, 0.3);
    for (size_t j = 0; j < en0.weights.size(); ++j) {
        CHECK(en0.weights[j] == doctest::Approx(rid.weights[j]).epsilon(1e-8));
    }
    CHECK(en0.intercept == doctest::Approx(rid.intercept).epsilon(1e-8));

    // rho = 1 reduces to lasso.
    const auto en1 = fit_elastic_net(X, y, 0.1, 1.0);
    const auto las = fit_lasso(X, y, 0.1);
    for (size_t j = 0; j < en1.weights.size(); ++j) {
        CHECK(en1.weights[j] == doctest::Approx(las.weights[j]).epsilon(1e-8));
    }

    // Middle rho: objective matches a long-run proximal-gradient oracle.
    const double lambda = 0.2, rho = 0.5;
    const auto en = fit_elastic_net(X, y, lambda, rho);
    const auto [wo, bo] = ista_oracle(Xd, y, lambda, rho);
    const double f_cd = elastic_net_objective(Xd, y, en.weights, en.intercept, lambda, rho);
    const double f_oracle = elastic_net_objective(Xd, y, wo, bo, lambda, rho);
    CHECK(std::fabs(f_cd - f_oracle) < 1e-6);
}

TEST_CASE("fitting is invariant to row order") {
    std::mt19937_64 rng(66);
    auto Xd = random_dense(12, 4, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(12);
    for (auto& v : y) v = u(rng);
    const auto base = fit_elastic_net(dense_to_matrix(Xd), y, 0.1, 0.5);

    std::vector<size_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<double>> Xp;
    std::vector<double> yp;
    for (size_t i : perm) {
        Xp.push_back(Xd[i]);
        yp.push_back(y[i]);
    }
    const auto shuffled = fit_elastic_net(dense_to_matrix(Xp), yp, 0.1, 0.5);
    for (size_t j = 0; j < base.weights.size(); ++j) {
        CHECK(base.weights[j] == doctest::Approx(shuffled.weights[j]).epsilon(1e-9));
    }
}

TEST_CASE("predict and classify at the 0.5 threshold") {
    LinearModel m;
    m.kind = LinearKind::ridge;
    m.weights = {0.0, 0.0};
    m.intercept = 0.7;
    const auto X = dense_to_matrix({{1.0, 1.0}, {9.0, -3.0}});
    const auto scores = predict_linear(m, X);
    CHECK(scores == std::vector<double>{0.7, 0.7});
    CHECK(classify_linear(m, X) == std::vector<int>{1, 1});
}

TEST_CASE("model JSON roundtrip") {
    LinearModel m;
    m.kind = LinearKind::elastic_net;
    m.weights = {0.25, -1.5, 0.0};
    m.intercept = 0.125;
    m.lambda = 0.3;
    m.l1_ratio = 0.7;
    const auto back = linear_model_from_json(linear_model_to_json(m));
    CHECK(back.kind == m.kind);
    CHECK(back.weights == m.weights);
    CHECK(back.intercept == m.intercept);
    CHECK(back.lambda == m.lambda);
    CHECK(back.l1_ratio == m.l1_ratio);
}

TEST_CASE("empty matrix is a fit error") {
    FeatureMatrix empty;
    CHECK_THROWS(fit_ridge(empty, {}, 0.1));
}
