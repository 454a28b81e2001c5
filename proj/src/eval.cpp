#include "fintext/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace fintext {

MetricReport classification_metrics(const std::vector<double>& scores,
                                    const std::vector<int>& labels) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw std::invalid_argument("classification_metrics: empty or mismatched input");
    }
    MetricReport r;
    for (size_t i = 0; i < scores.size(); ++i) {
        const int pred = scores[i] > 0.5 ? 1 : 0;
        if (labels[i] == 1) {
            pred == 1 ? ++r.tp : ++r.fn;
        } else {
            pred == 0 ? ++r.tn : ++r.fp;
        }
    }
    const long n = static_cast<long>(scores.size());
    const long pos = r.tp + r.fn;
    const long neg = r.tn + r.fp;
    r.accuracy = static_cast<double>(r.tp + r.tn) / n;
    double sensitivity = 0.0, specificity = 0.0;
    if (pos > 0) {
        sensitivity = static_cast<double>(r.tp) / pos;
    } else {
        r.sensitivity_defined = false;
    }
    if (neg > 0) {
        specificity = static_cast<double>(r.tn) / neg;
    } else {
        r.specificity_defined = false;
    }
    r.balanced_accuracy = (sensitivity + specificity) / 2.0;

    if (pos == 0 || neg == 0) {
        r.auc_defined = false;
        r.auc = 0.5;
        return r;
    }
    // Rank statistic with average ranks for ties.
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(scores.size());
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double pos_rank_sum = 0.0;
    for (size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == 1) pos_rank_sum += rank[k];
    }
    r.auc = (pos_rank_sum - static_cast<double>(pos) * (pos + 1) / 2.0) /
            (static_cast<double>(pos) * static_cast<double>(neg));
    return r;
}

MetricReport regression_metrics(const std::vector<double>& preds,
                                const std::vector<double>& targets) {
    if (preds.empty() || preds.size() != targets.size()) {
        throw std::invalid_argument("regression_metrics: empty or mismatched input");
    }
    MetricReport r;
    double se = 0.0, ae = 0.0;
    for (size_t i = 0; i < preds.size(); ++i) {
        const double d = preds[i] - targets[i];
        se += d * d;
        ae += std::fabs(d);
    }
    r.mse = se / static_cast<double>(preds.size());
    r.rmse = std::sqrt(r.mse);
    r.mae = ae / static_cast<double>(preds.size());
    return r;
}

std::string metric_report_to_json(const MetricReport& r, bool classification) {
    nlohmann::json j;
    if (classification) {
        j["accuracy"] = r.accuracy;
        j["balanced_accuracy"] = r.balanced_accuracy;
        j["auc"] = r.auc;
        j["auc_defined"] = r.auc_defined;
        j["counts"] = {{"tp", r.tp}, {"fp", r.fp}, {"tn", r.tn}, {"fn", r.fn}};
    } else {
        j["rmse"] = r.rmse;
        j["mse"] = r.mse;
        j["mae"] = r.mae;
    }
    return j.dump(2);
}

double GridPoint::get(const std::string& name) const {
    for (const auto& [k, v] : values) {
        if (k == name) return v;
    }
    throw std::out_of_range("grid point has no parameter '" + name + "'");
}

std::vector<FoldSpec> rolling_origin_folds(size_t n, int k) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (n < static_cast<size_t>(k)) throw std::invalid_argument("need at least k instances");
    // Subset sizes as equal as possible; earlier subsets take the remainder.
    const size_t q = n / static_cast<size_t>(k);
    const size_t rem = n % static_cast<size_t>(k);
    std::vector<size_t> bounds{0};
    for (int i = 0; i < k; ++i) {
        bounds.push_back(bounds.back() + q + (static_cast<size_t>(i) < rem ? 1 : 0));
    }
    std::vector<FoldSpec> folds;
    for (int i = 2; i <= k; ++i) {
        FoldSpec f;
        f.train = {0, bounds[static_cast<size_t>(i - 1)]};
        f.validation = {bounds[static_cast<size_t>(i - 1)], bounds[static_cast<size_t>(i)]};
        folds.push_back(f);
    }
    return folds;
}

namespace {

std::vector<GridPoint> enumerate_grid(const ParamGrid& grid) {
    std::vector<GridPoint> points;
    if (grid.axes.empty()) throw std::invalid_argument("empty parameter grid");
    for (const auto& [name, vals] : grid.axes) {
        if (vals.empty()) throw std::invalid_argument("empty range for parameter '" + name + "'");
    }
    std::vector<size_t> idx(grid.axes.size(), 0);
    while (true) {
        GridPoint p;
        for (size_t a = 0; a < grid.axes.size(); ++a) {
            p.values.emplace_back(grid.axes[a].first, grid.axes[a].second[idx[a]]);
        }
        points.push_back(std::move(p));
        // odometer, rightmost fastest
        size_t a = grid.axes.size();
        while (a-- > 0) {
            if (++idx[a] < grid.axes[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return points;
        }
    }
}

void check_sorted(const std::vector<int64_t>& timestamps) {
    if (!std::is_sorted(timestamps.begin(), timestamps.end())) {
        throw std::invalid_argument("dataset is not in chronological order");
    }
}

TuneOutcome run_search(const std::vector<FoldSpec>& folds, const ParamGrid& grid,
                       const FoldScorer& scorer, TuneMetric metric, int jobs) {
    TuneOutcome out;
    const auto points = enumerate_grid(grid);
    out.results.resize(points.size());

    auto evaluate_point = [&](size_t p) {
        TuneResult& res = out.results[p];
        res.point = points[p];
        for (const auto& f : folds) {
            res.fold_scores.push_back(scorer(points[p], f.train, f.validation));
        }
        res.aggregate = std::accumulate(res.fold_scores.begin(), res.fold_scores.end(), 0.0) /
                        static_cast<double>(res.fold_scores.size());
    };
    if (jobs <= 1 || points.size() == 1) {
        for (size_t p = 0; p < points.size(); ++p) evaluate_point(p);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        const size_t n_workers = std::min(static_cast<size_t>(jobs), points.size());
        for (size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (size_t p = next.fetch_add(1); p < points.size(); p = next.fetch_add(1)) {
                    evaluate_point(p);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    // Winner selection is by grid order regardless of jobs; ties keep the
    // earlier point.
    const bool maximize = metric == TuneMetric::balanced_accuracy_max;
    size_t best_idx = 0;
    for (size_t p = 1; p < out.results.size(); ++p) {
        const double a = out.results[p].aggregate;
        const double b = out.results[best_idx].aggregate;
        if (maximize ? a > b : a < b) best_idx = p;
    }
    out.results[best_idx].winner = true;
    out.best = out.results[best_idx].point;
    return out;
}

}  // namespace

TuneOutcome ts_cross_validate(const std::vector<int64_t>& timestamps, int k,
                              const ParamGrid& grid, const FoldScorer& scorer,
                              TuneMetric metric, int jobs) {
    check_sorted(timestamps);
    return run_search(rolling_origin_folds(timestamps.size(), k), grid, scorer, metric, jobs);
}

TuneOutcome holdout_tune(const std::vector<int64_t>& timestamps, double fraction,
                         const ParamGrid& grid, const FoldScorer& scorer, TuneMetric metric,
                         int jobs) {
    check_sorted(timestamps);
    if (fraction <= 0 || fraction >= 1) throw std::invalid_argument("fraction must lie in (0,1)");
    const size_t n = timestamps.size();
    const size_t n_val = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n_val == 0 || n_val == n) throw std::invalid_argument("holdout split would be empty");
    std::vector<FoldSpec> folds{{{0, n - n_val}, {n - n_val, n}}};
    return run_search(folds, grid, scorer, metric, jobs);
}

void save_tuning_csv(const TuneOutcome& outcome, const ParamGrid& grid, const std::string& path,
                     const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    for (const auto& [name, vals] : grid.axes) out << name << ',';
    out << "fold,score,aggregate,winner\n";
    for (const auto& res : outcome.results) {
        for (size_t f = 0; f < res.fold_scores.size(); ++f) {
            for (const auto& [name, v] : res.point.values) out << v << ',';
            out << (f + 2) << ',' << res.fold_scores[f] << ',' << res.aggregate << ','
                << (res.winner ? 1 : 0) << '\n';
        }
    }
}

}  // namespace fintext
