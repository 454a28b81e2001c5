#include "fintext/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fintext/datetime.hpp"
#include "json.hpp"

namespace fintext {

void DocumentSet::sort_and_check() {
    std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) {
        return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
    });
    std::set<std::string> seen;
    for (const auto& d : docs) {
        if (d.id.empty()) throw std::runtime_error("document with empty id");
        if (!seen.insert(d.id).second) {
            throw std::runtime_error("duplicate document id '" + d.id + "'");
        }
    }
}

const PricePoint* PriceSeries::last_before(int64_t date) const {
    auto it = std::lower_bound(points.begin(), points.end(), date,
                               [](const PricePoint& p, int64_t d) { return p.date < d; });
    if (it == points.begin()) return nullptr;
    return &*std::prev(it);
}

const PricePoint* PriceSeries::at(int64_t date) const {
    auto it = std::lower_bound(points.begin(), points.end(), date,
                               [](const PricePoint& p, int64_t d) { return p.date < d; });
    if (it == points.end() || it->date != date) return nullptr;
    return &*it;
}

DocumentSet load_documents(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open document file '" + path + "'");
    DocumentSet set;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("timestamp") ||
            !j.contains("ticker") || !j.contains("text")) {
            throw std::runtime_error("parse error in '" + path + "' line " +
                                     std::to_string(lineno));
        }
        Document d;
        try {
            d.id = j.at("id").get<std::string>();
            d.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
            d.ticker = j.at("ticker").get<std::string>();
            d.text = j.at("text").get<std::string>();
        } catch (const std::exception& e) {
            throw std::runtime_error("parse error in '" + path + "' line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        if (d.text.empty()) {
            throw std::runtime_error("parse error in '" + path + "' line " +
                                     std::to_string(lineno) + ": empty text");
        }
        set.docs.push_back(std::move(d));
    }
    set.sort_and_check();
    return set;
}

void save_documents(const DocumentSet& docs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& d : docs.docs) {
        nlohmann::json j{{"id", d.id},
                         {"timestamp", format_timestamp(d.timestamp)},
                         {"ticker", d.ticker},
                         {"text", d.text}};
        out << j.dump() << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

void append_point(PriceSeries& s, int64_t date, double close, const std::string& path) {
    if (close <= 0) throw std::runtime_error("non-positive close in '" + path + "'");
    if (!s.points.empty() && s.points.back().date >= date) {
        throw std::runtime_error("dates not strictly increasing in '" + path + "' for ticker '" +
                                 s.ticker + "'");
    }
    s.points.push_back({date, close});
}

}  // namespace

PriceSeries load_market_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open market file '" + path + "'");
    PriceSeries s;
    s.ticker = "MARKET";
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 2) throw std::runtime_error("malformed market row in '" + path + "'");
        append_point(s, parse_date(cells[0]), std::stod(cells[1]), path);
    }
    return s;
}

PriceMap load_prices_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open price file '" + path + "'");
    PriceMap map;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) throw std::runtime_error("malformed price row in '" + path + "'");
        PriceSeries& s = map[cells[1]];
        s.ticker = cells[1];
        append_point(s, parse_date(cells[0]), std::stod(cells[2]), path);
    }
    return map;
}

void save_market_csv(const PriceSeries& market, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "date,close\n";
    for (const auto& p : market.points) {
        out << format_date(p.date) << ',' << p.close << '\n';
    }
}

void save_prices_csv(const PriceMap& prices, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "date,ticker,close\n";
    for (const auto& [ticker, series] : prices) {
        for (const auto& p : series.points) {
            out << format_date(p.date) << ',' << ticker << ',' << p.close << '\n';
        }
    }
}

DocumentSet filter_corpus(const DocumentSet& docs, const PriceMap& prices,
                          const PriceSeries& market, double min_price, FilterStats* stats) {
    if (min_price <= 0) throw std::invalid_argument("min_price must be > 0");
    FilterStats local;
    DocumentSet out;
    for (const auto& d : docs.docs) {
        const int64_t date = timestamp_date(d.timestamp);
        auto it = prices.find(d.ticker);
        if (it == prices.end()) {
            ++local.dropped_no_prices;
            continue;
        }
        const PricePoint* prior = it->second.last_before(date);
        if (prior == nullptr || prior->close < min_price) {
            ++local.dropped_penny;
            continue;
        }
        if (market.at(date) == nullptr) {
            ++local.dropped_non_trading;
            continue;
        }
        out.docs.push_back(d);
    }
    if (stats) *stats = local;
    return out;  // input order was sorted; subset stays sorted
}

std::pair<DocumentSet, DocumentSet> chronological_split(const DocumentSet& docs,
                                                        double train_fraction) {
    if (docs.empty()) throw std::invalid_argument("cannot split an empty corpus");
    if (train_fraction <= 0 || train_fraction >= 1) {
        throw std::invalid_argument("train_fraction must lie in (0,1)");
    }
    const size_t n = docs.size();
    const size_t n_train = static_cast<size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw std::runtime_error("split would leave an empty train or test set");
    }
    DocumentSet train, test;
    train.docs.assign(docs.docs.begin(), docs.docs.begin() + n_train);
    test.docs.assign(docs.docs.begin() + n_train, docs.docs.end());
    return {std::move(train), std::move(test)};
}

namespace {

std::string filler_word(int i) {
    std::string w = "f";
    for (int k = 0; k < 3; ++k) {
        w.push_back(static_cast<char>('a' + i % 26));
        i /= 26;
    }
    return w;
}

}  // namespace

int negation_oracle_label(const std::vector<std::string>& tokens) {
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == kGainToken || tokens[i] == kLossToken) {
            const bool gain = tokens[i] == kGainToken;
            const bool negated = i > 0 && tokens[i - 1] == kNegToken;
            return (gain != negated) ? 1 : 0;
        }
    }
    throw std::runtime_error("no signal token in document");
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_docs < 4) throw std::invalid_argument("n_docs must be >= 4");
    if (spec.vocab_size < 8) throw std::invalid_argument("vocab_size must be >= 8");
    if (spec.min_len < 2 || spec.max_len < spec.min_len) {
        throw std::invalid_argument("invalid doc_length range");
    }
    if (spec.signal_strength < 0 || spec.signal_strength > 1) {
        throw std::invalid_argument("signal_strength must lie in [0,1]");
    }

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> len_dist(spec.min_len, spec.max_len);
    const int n_fillers = spec.vocab_size - 3;
    std::uniform_int_distribution<int> filler_dist(0, n_fillers - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    constexpr int kWarmup = 25;  // trading days before the first disclosure
    const int64_t day0 = days_from_civil(2020, 1, 1);
    const int64_t last_day = day0 + kWarmup + spec.n_docs - 1;

    // Market index: small daily moves so the planted abnormal return decides
    // the sign of the nominal return as well.
    SyntheticCorpus out;
    out.market.ticker = "MARKET";
    double m_close = 1000.0;
    std::vector<double> market_return(static_cast<size_t>(last_day - day0 + 1), 0.0);
    out.market.points.push_back({day0, m_close});
    for (int64_t d = day0 + 1; d <= last_day; ++d) {
        const double r = (unit(rng) - 0.5) * 0.4;  // percent
        market_return[static_cast<size_t>(d - day0)] = r;
        m_close *= std::exp(r / 100.0);
        out.market.points.push_back({d, m_close});
    }

    constexpr double kAlpha = 0.02;
    constexpr double kBeta = 1.0;

    for (int i = 0; i < spec.n_docs; ++i) {
        const int64_t event_day = day0 + kWarmup + i;
        const int len = len_dist(rng);
        std::vector<std::string> tokens(static_cast<size_t>(len));
        for (auto& t : tokens) t = filler_word(filler_dist(rng));

        const bool gain = unit(rng) < 0.5;
        int intended;
        if (spec.signal_kind == SignalKind::keyword) {
            const int pos =
                std::min(len - 1, spec.signal_min_pos + static_cast<int>(unit(rng) * 4));
            tokens[static_cast<size_t>(pos)] = gain ? kGainToken : kLossToken;
            intended = gain ? 1 : 0;
        } else {
            const bool negated = unit(rng) < 0.5;
            const int lo = std::min(len - 2, std::max(1, spec.signal_min_pos));
            const int pos = lo + static_cast<int>(unit(rng) * 2);
            const int p = std::min(pos, len - 1);
            tokens[static_cast<size_t>(p)] = gain ? kGainToken : kLossToken;
            if (negated) tokens[static_cast<size_t>(p - 1)] = kNegToken;
            intended = (gain != negated) ? 1 : 0;
        }

        // Flip the realized sign with probability 1 - signal_strength.
        int realized = intended;
        if (unit(rng) >= spec.signal_strength) realized = 1 - realized;

        // Price history: 21 closes before the event plus the event close, so
        // 20 pre-event return observations are available.
        char name[16];
        std::snprintf(name, sizeof name, "S%04d", i);
        PriceSeries series;
        series.ticker = name;
        double close = 20.0 + unit(rng) * 80.0;
        int64_t start = event_day - 21;
        series.points.push_back({start, close});
        for (int64_t d = start + 1; d < event_day; ++d) {
            const double noise = (unit(rng) - 0.5) * 0.1;
            const double r = kAlpha + kBeta * market_return[static_cast<size_t>(d - day0)] + noise;
            close *= std::exp(r / 100.0);
            series.points.push_back({d, close});
        }
        const double ar = (realized ? 1.0 : -1.0) * (1.0 + unit(rng) * 2.0);
        const double event_r =
            kAlpha + kBeta * market_return[static_cast<size_t>(event_day - day0)] + ar;
        close *= std::exp(event_r / 100.0);
        series.points.push_back({event_day, close});
        out.prices[name] = std::move(series);

        Document doc;
        char id[16];
        std::snprintf(id, sizeof id, "doc%04d", i);
        doc.id = id;
        doc.ticker = name;
        doc.timestamp = event_day * 86400 + 9 * 3600;
        std::string text;
        for (size_t t = 0; t < tokens.size(); ++t) {
            if (t) text.push_back(' ');
            text += tokens[t];
        }
        doc.text = std::move(text);
        out.docs.docs.push_back(std::move(doc));
        out.true_labels.push_back(event_r > 0 ? 1 : 0);
    }
    out.docs.sort_and_check();
    return out;
}

}  // namespace fintext
