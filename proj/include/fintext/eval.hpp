#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fintext {

struct MetricReport {
    // classification
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double auc = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    bool auc_defined = true;          // false when one class is absent (reported 0.5)
    bool sensitivity_defined = true;  // false when there are no positives
    bool specificity_defined = true;
    // regression
    double rmse = 0.0;
    double mse = 0.0;
    double mae = 0.0;
};

// Decisions at threshold 0.5; AUC by the rank statistic with average ranks
// for ties.
MetricReport classification_metrics(const std::vector<double>& scores,
                                    const std::vector<int>& labels);

MetricReport regression_metrics(const std::vector<double>& preds,
                                const std::vector<double>& targets);

std::string metric_report_to_json(const MetricReport& r, bool classification);

// --- parameter tuning ------------------------------------------------------

// Declared parameter order; grid iteration runs rightmost axis fastest.
struct ParamGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;
};

struct GridPoint {
    std::vector<std::pair<std::string, double>> values;

    double get(const std::string& name) const;
};

enum class TuneMetric { balanced_accuracy_max, mse_min };

struct IndexRange {
    size_t begin = 0;
    size_t end = 0;  // half-open
};

// Trains on `train` and scores on `validation`; rows are indices into the
// chronologically ordered dataset the caller owns. A fold whose training
// labels are single-class should be scored as 0.5 balanced accuracy.
using FoldScorer = std::function<double(const GridPoint&, IndexRange train, IndexRange val)>;

struct FoldSpec {
    IndexRange train;
    IndexRange validation;
};

// Rolling-origin folds: data split into k chronological subsets; fold i
// (i = 2..k) trains on subsets 1..i-1 and validates on subset i.
std::vector<FoldSpec> rolling_origin_folds(size_t n, int k);

struct TuneResult {
    GridPoint point;
    std::vector<double> fold_scores;
    double aggregate = 0.0;  // mean over scored folds
    bool winner = false;
};

struct TuneOutcome {
    GridPoint best;
    std::vector<TuneResult> results;
};

// Exhaustive grid search with time-series cross-validation. `timestamps`
// must be sorted ascending (the dataset's chronological order). `jobs` > 1
// evaluates grid points in parallel; the scorer must then be thread-safe.
TuneOutcome ts_cross_validate(const std::vector<int64_t>& timestamps, int k,
                              const ParamGrid& grid, const FoldScorer& scorer,
                              TuneMetric metric, int jobs = 1);

// Single chronological split: train on the first 1-fraction, validate on the
// last fraction.
TuneOutcome holdout_tune(const std::vector<int64_t>& timestamps, double fraction,
                         const ParamGrid& grid, const FoldScorer& scorer, TuneMetric metric,
                         int jobs = 1);

// CSV `param_1,...,param_l,fold,score,aggregate,winner`; `header_comment`
// (config hash and seed) is written as a leading '#' line when non-empty.
void save_tuning_csv(const TuneOutcome& outcome, const ParamGrid& grid, const std::string& path,
                     const std::string& header_comment = "");

}  // namespace fintext
