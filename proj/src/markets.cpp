#include "fintext/markets.hpp"

#include <cmath>
#include <stdexcept>

namespace fintext {

double log_return(const PriceSeries& series, int64_t date) {
    const PricePoint* today = series.at(date);
    if (today == nullptr) {
        throw std::runtime_error("no close for ticker '" + series.ticker + "' on requested date");
    }
    const PricePoint* prev = series.last_before(date);
    if (prev == nullptr) {
        throw std::runtime_error("no prior close for ticker '" + series.ticker + "'");
    }
    return 100.0 * std::log(today->close / prev->close);
}

MarketModel estimate_market_model(const std::vector<ReturnObservation>& obs, int window) {
    if (window < 2) throw std::invalid_argument("window must be >= 2");
    if (static_cast<int>(obs.size()) < window) {
        throw std::runtime_error("insufficient history: need " + std::to_string(window) +
                                 " observations, have " + std::to_string(obs.size()));
    }
    const size_t begin = obs.size() - static_cast<size_t>(window);
    double mean_s = 0.0, mean_m = 0.0;
    for (size_t i = begin; i < obs.size(); ++i) {
        mean_s += obs[i].stock_return;
        mean_m += obs[i].market_return;
    }
    mean_s /= window;
    mean_m /= window;
    double cov = 0.0, var = 0.0;
    for (size_t i = begin; i < obs.size(); ++i) {
        const double dm = obs[i].market_return - mean_m;
        cov += dm * (obs[i].stock_return - mean_s);
        var += dm * dm;
    }
    // Constant market returns leave only rounding residue in var; compare
    // against the magnitude of the inputs rather than literal zero.
    const double scale = var + window * mean_m * mean_m;
    if (var <= 1e-24 * scale) {
        throw std::runtime_error("degenerate regression: zero market variance");
    }
    MarketModel model;
    model.window = window;
    model.beta = cov / var;
    model.alpha = mean_s - model.beta * mean_m;
    return model;
}

double abnormal_return(double stock_return, double market_return, const MarketModel& model) {
    return stock_return - (model.alpha + model.beta * market_return);
}

Label make_label(double target) {
    if (!std::isfinite(target)) throw std::invalid_argument("non-finite return target");
    return {target > 0.0 ? 1 : 0, target};
}

PortfolioExpectation expected_portfolio(double accuracy, int n_days, double per_event_log_return,
                                        double start_value) {
    if (accuracy < 0.0 || accuracy > 1.0) throw std::invalid_argument("accuracy must lie in [0,1]");
    if (n_days < 0) throw std::invalid_argument("n_days must be >= 0");
    PortfolioExpectation out;
    out.expected_log_return = n_days * (2.0 * accuracy - 1.0) * per_event_log_return;
    out.expected_value = start_value * std::exp(out.expected_log_return);
    return out;
}

}  // namespace fintext
