#pragma once

#include <cstdint>
#include <vector>

#include "fintext/corpus.hpp"

namespace fintext {

// Daily stock/market return pair, in percentage points.
struct ReturnObservation {
    int64_t date = 0;
    double stock_return = 0.0;
    double market_return = 0.0;
};

// Single-factor market model r = alpha + beta * r_m, estimated by OLS over
// a fixed pre-event window.
struct MarketModel {
    double alpha = 0.0;
    double beta = 0.0;
    int window = 20;
};

struct Label {
    int cls = 0;          // 1 = positive, 0 = negative
    double target = 0.0;  // percent return, nominal or abnormal
};

// 100 * ln(close_t / close_{t-1}) at `date`. Throws when the date or a
// previous trading date is missing.
double log_return(const PriceSeries& series, int64_t date);

// OLS of stock on market returns over the most recent `window` observations
// (the tail of `obs`). Throws on insufficient history or zero market variance.
MarketModel estimate_market_model(const std::vector<ReturnObservation>& obs, int window);

double abnormal_return(double stock_return, double market_return, const MarketModel& model);

// class 1 iff target > 0; zero counts as negative.
Label make_label(double target);

struct PortfolioExpectation {
    double expected_log_return = 0.0;
    double expected_value = 0.0;
};

// expected_log_return = n_days * (2p - 1) * r, value = start * exp(...).
PortfolioExpectation expected_portfolio(double accuracy, int n_days, double per_event_log_return,
                                        double start_value);

}  // namespace fintext
