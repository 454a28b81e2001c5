#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fintext/eval.hpp"

using namespace fintext;
namespace fs = std::filesystem;

namespace {

// Brute-force AUC: fraction of (positive, negative) pairs won, ties half.
double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0;
    long pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("classification_metrics hand arithmetic") {
    // tp=50, fn=50, tn=30, fp=20.
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 50; ++i) { scores.push_back(0.9); labels.push_back(1); }  // tp
    for (int i = 0; i < 50; ++i) { scores.push_back(0.1); labels.push_back(1); }  // fn
    for (int i = 0; i < 30; ++i) { scores.push_back(0.1); labels.push_back(0); }  // tn
    for (int i = 0; i < 20; ++i) { scores.push_back(0.9); labels.push_back(0); }  // fp
    const auto r = classification_metrics(scores, labels);
    CHECK(r.tp == 50);
    CHECK(r.fn == 50);
    CHECK(r.tn == 30);
    CHECK(r.fp == 20);
    CHECK(r.balanced_accuracy == doctest::Approx(0.55));  // (0.5 + 0.6)/2
}

TEST_CASE("constant predictor on an unbalanced set") {
    std::vector<double> scores(100, 0.9);
    std::vector<int> labels(100, 0);
    for (int i = 0; i < 54; ++i) labels[i] = 1;
    const auto r = classification_metrics(scores, labels);
    CHECK(r.accuracy == doctest::Approx(0.54));
    CHECK(r.balanced_accuracy == doctest::Approx(0.5));
    CHECK(r.auc == doctest::Approx(0.5));  // all scores tied
}

TEST_CASE("AUC extremes and missing classes") {
    const auto perfect = classification_metrics({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1});
    CHECK(perfect.auc == doctest::Approx(1.0));
    const auto inverted = classification_metrics({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1});
    CHECK(inverted.auc == doctest::Approx(0.0));
    const auto one_class = classification_metrics({0.2, 0.8}, {1, 1});
    CHECK_FALSE(one_class.auc_defined);
    CHECK(one_class.auc == 0.5);
    CHECK_FALSE(one_class.specificity_defined);
    CHECK_THROWS(classification_metrics({}, {}));
}

TEST_CASE("AUC equals the brute-force pairwise statistic") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> n_d(4, 60), score_d(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = n_d(rng);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has_pos = false, has_neg = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = score_d(rng) / 10.0;  // heavy ties on purpose
            labels[i] = static_cast<int>(rng() % 2);
            (labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        const auto r = classification_metrics(scores, labels);
        CHECK(r.auc == doctest::Approx(pairwise_auc(scores, labels)).epsilon(1e-12));
    }
}

TEST_CASE("regression_metrics") {
    const auto zero = regression_metrics({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
    CHECK(zero.mse == 0.0);
    CHECK(zero.rmse == 0.0);
    CHECK(zero.mae == 0.0);

    const auto hand = regression_metrics({1.0, 2.0}, {0.0, 0.0});
    CHECK(hand.mse == doctest::Approx(2.5));
    CHECK(hand.rmse == doctest::Approx(1.581139).epsilon(1e-6));
    CHECK(hand.mae == doctest::Approx(1.5));
    CHECK(hand.rmse * hand.rmse == doctest::Approx(hand.mse).epsilon(1e-12));

    // Constant prediction at the target mean scores the population variance.
    const std::vector<double> targets{1.0, 3.0, 5.0, 7.0};
    const double mean = 4.0;
    const auto var = regression_metrics(std::vector<double>(4, mean), targets);
    CHECK(var.mse == doctest::Approx(5.0));
    CHECK_THROWS(regression_metrics({}, {}));
}

TEST_CASE("rolling_origin_folds structure") {
    // k=3: fold 1 trains on T1 and validates on T2; fold 2 trains on T1+T2,
    // validates on T3.
    const auto folds = rolling_origin_folds(9, 3);
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].train.begin == 0);
    CHECK(folds[0].train.end == 3);
    CHECK(folds[0].validation.begin == 3);
    CHECK(folds[0].validation.end == 6);
    CHECK(folds[1].train.begin == 0);
    CHECK(folds[1].train.end == 6);
    CHECK(folds[1].validation.begin == 6);
    CHECK(folds[1].validation.end == 9);

    // Remainder goes to the earlier subsets.
    const auto uneven = rolling_origin_folds(10, 3);
    CHECK(uneven[0].train.end == 4);
    CHECK(uneven[0].validation.end == 7);
    CHECK(uneven[1].validation.end == 10);

    CHECK_THROWS(rolling_origin_folds(10, 1));
    CHECK_THROWS(rolling_origin_folds(2, 3));
}

TEST_CASE("folds never leak time") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 5 + rng() % 200;
        const int k = 2 + static_cast<int>(rng() % 6);
        if (n < static_cast<size_t>(k)) continue;
        std::vector<int64_t> ts(n);
        int64_t t = 0;
        for (auto& v : ts) v = (t += 1 + static_cast<int64_t>(rng() % 5));
        for (const auto& f : rolling_origin_folds(n, k)) {
            CHECK(ts[f.train.end - 1] < ts[f.validation.begin]);
            CHECK(f.train.begin == 0);
            CHECK(f.train.end == f.validation.begin);
        }
    }
}

TEST_CASE("grid search winners and ties") {
    std::vector<int64_t> ts(12);
    for (size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<int64_t>(i);

    SUBCASE("single point wins regardless of score") {
        ParamGrid grid;
        grid.axes.emplace_back("lambda", std::vector<double>{0.3});
        const auto out = ts_cross_validate(
            ts, 3, grid, [](const GridPoint&, IndexRange, IndexRange) { return 0.0; },
            TuneMetric::balanced_accuracy_max);
        CHECK(out.best.get("lambda") == 0.3);
        CHECK(out.results.size() == 1);
        CHECK(out.results[0].winner);
    }

    SUBCASE("dominant parameter wins under both metrics") {
        ParamGrid grid;
        grid.axes.emplace_back("p", std::vector<double>{1.0, 2.0, 3.0});
        auto scorer = [](const GridPoint& g, IndexRange, IndexRange) {
            return g.get("p") == 2.0 ? 0.9 : 0.4;
        };
        const auto max_out =
            ts_cross_validate(ts, 4, grid, scorer, TuneMetric::balanced_accuracy_max);
        CHECK(max_out.best.get("p") == 2.0);
        const auto min_out = ts_cross_validate(ts, 4, grid, scorer, TuneMetric::mse_min);
        CHECK(min_out.best.get("p") != 2.0);

        // Winner invariance under a strictly monotone metric transform.
        auto transformed = [&](const GridPoint& g, IndexRange a, IndexRange b) {
            return std::exp(3.0 * scorer(g, a, b)) + 1.0;
        };
        CHECK(ts_cross_validate(ts, 4, grid, transformed, TuneMetric::balanced_accuracy_max)
                  .best.get("p") == 2.0);
    }

    SUBCASE("ties keep the first point in declared order") {
        ParamGrid grid;
        grid.axes.emplace_back("a", std::vector<double>{1.0, 2.0});
        grid.axes.emplace_back("b", std::vector<double>{10.0, 20.0});
        const auto out = ts_cross_validate(
            ts, 3, grid, [](const GridPoint&, IndexRange, IndexRange) { return 0.7; },
            TuneMetric::balanced_accuracy_max);
        CHECK(out.best.get("a") == 1.0);
        CHECK(out.best.get("b") == 10.0);
        // Iteration order: rightmost axis fastest.
        REQUIRE(out.results.size() == 4);
        CHECK(out.results[1].point.get("a") == 1.0);
        CHECK(out.results[1].point.get("b") == 20.0);
    }

    SUBCASE("unsorted timestamps are rejected") {
        auto bad = ts;
        std::swap(bad[0], bad[5]);
        ParamGrid grid;
        grid.axes.emplace_back("x", std::vector<double>{1.0});
        CHECK_THROWS(ts_cross_validate(
            bad, 3, grid, [](const GridPoint&, IndexRange, IndexRange) { return 0.0; },
            TuneMetric::mse_min));
    }
}

TEST_CASE("parallel grid search matches sequential results") {
    std::vector<int64_t> ts(30);
    for (size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<int64_t>(i);
    ParamGrid grid;
    grid.axes.emplace_back("p", std::vector<double>{1, 2, 3, 4, 5, 6, 7});
    auto scorer = [](const GridPoint& g, IndexRange tr, IndexRange va) {
        return std::sin(g.get("p")) + 0.001 * static_cast<double>(tr.end + va.end);
    };
    const auto seq = ts_cross_validate(ts, 5, grid, scorer, TuneMetric::balanced_accuracy_max, 1);
    const auto par = ts_cross_validate(ts, 5, grid, scorer, TuneMetric::balanced_accuracy_max, 4);
    REQUIRE(seq.results.size() == par.results.size());
    for (size_t i = 0; i < seq.results.size(); ++i) {
        CHECK(seq.results[i].aggregate == par.results[i].aggregate);
        CHECK(seq.results[i].winner == par.results[i].winner);
    }
}

TEST_CASE("holdout_tune split and CV equivalence") {
    std::vector<int64_t> ts(100);
    for (size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<int64_t>(i);
    ParamGrid grid;
    grid.axes.emplace_back("x", std::vector<double>{1.0});
    size_t seen_train = 0, seen_val = 0;
    holdout_tune(
        ts, 0.1, grid,
        [&](const GridPoint&, IndexRange tr, IndexRange va) {
            seen_train = tr.end - tr.begin;
            seen_val = va.end - va.begin;
            return 0.0;
        },
        TuneMetric::mse_min);
    CHECK(seen_train == 90);
    CHECK(seen_val == 10);

    // With k=2 on an evenly divisible set the CV fold equals a 0.5 holdout.
    std::vector<int64_t> ts2(10);
    for (size_t i = 0; i < ts2.size(); ++i) ts2[i] = static_cast<int64_t>(i);
    auto record = [](const GridPoint&, IndexRange tr, IndexRange va) {
        return static_cast<double>(tr.end * 100 + va.end);
    };
    const auto cv = ts_cross_validate(ts2, 2, grid, record, TuneMetric::mse_min);
    const auto ho = holdout_tune(ts2, 0.5, grid, record, TuneMetric::mse_min);
    CHECK(cv.results[0].fold_scores == ho.results[0].fold_scores);

    CHECK_THROWS(holdout_tune(ts2, 0.0, grid, record, TuneMetric::mse_min));
    CHECK_THROWS(holdout_tune(ts2, 1.0, grid, record, TuneMetric::mse_min));
}

TEST_CASE("tuning CSV layout") {
    std::vector<int64_t> ts(9);
    for (size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<int64_t>(i);
    ParamGrid grid;
    grid.axes.emplace_back("lambda", std::vector<double>{0.5, 1.5});
    const auto out = ts_cross_validate(
        ts, 3, grid,
        [](const GridPoint& g, IndexRange, IndexRange) { return g.get("lambda"); },
        TuneMetric::balanced_accuracy_max);
    const auto path = fs::temp_directory_path() / "fintext_tuning_test.csv";
    save_tuning_csv(out, grid, path.string(), "hash=abc seed=0");

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# hash=abc seed=0");
    std::getline(in, line);
    CHECK(line == "lambda,fold,score,aggregate,winner");
    std::getline(in, line);
    CHECK(line == "0.5,2,0.5,0.5,0");
    std::getline(in, line);
    CHECK(line == "0.5,3,0.5,0.5,0");
    std::getline(in, line);
    CHECK(line == "1.5,2,1.5,1.5,1");
    fs::remove(path);
}
