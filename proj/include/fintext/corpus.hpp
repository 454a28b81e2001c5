#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fintext {

// One disclosure. `timestamp` is epoch seconds UTC.
struct Document {
    std::string id;
    int64_t timestamp = 0;
    std::string ticker;
    std::string text;
};

// Documents sorted ascending by (timestamp, id). Every operation that
// returns a DocumentSet preserves this order.
struct DocumentSet {
    std::vector<Document> docs;

    size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }

    void sort_and_check();  // sorts and rejects duplicate ids
};

struct PricePoint {
    int64_t date = 0;  // epoch days
    double close = 0.0;
};

// Daily closes for one ticker; dates strictly increasing, close > 0.
struct PriceSeries {
    std::string ticker;
    std::vector<PricePoint> points;

    // Last close strictly before `date`, or nullptr when there is none.
    const PricePoint* last_before(int64_t date) const;
    const PricePoint* at(int64_t date) const;
};

using PriceMap = std::map<std::string, PriceSeries>;

enum class SignalKind { keyword, negation };

struct SyntheticSpec {
    int n_docs = 100;
    int vocab_size = 50;
    SignalKind signal_kind = SignalKind::keyword;
    double signal_strength = 1.0;  // probability the return sign follows the planted token
    int min_len = 5;
    int max_len = 20;
    int signal_min_pos = 0;  // earliest token position of the planted signal
    uint64_t seed = 0;
};

struct SyntheticCorpus {
    DocumentSet docs;
    PriceMap prices;
    PriceSeries market;
    std::vector<int> true_labels;  // 1 = positive return, aligned with docs
};

struct FilterStats {
    size_t dropped_no_prices = 0;    // ticker absent from the price map
    size_t dropped_penny = 0;        // prior close below the cutoff
    size_t dropped_non_trading = 0;  // disclosure date not in the market series
};

// JSON-lines, one object per line with keys {"id","timestamp","ticker","text"}.
DocumentSet load_documents(const std::string& path);
void save_documents(const DocumentSet& docs, const std::string& path);

// CSV `date,close` / `date,ticker,close` with header.
PriceSeries load_market_csv(const std::string& path);
PriceMap load_prices_csv(const std::string& path);
void save_market_csv(const PriceSeries& market, const std::string& path);
void save_prices_csv(const PriceMap& prices, const std::string& path);

// Penny-stock filter (prior close >= min_price is retained) plus the
// trading-day rule (disclosure date must appear in the market series).
DocumentSet filter_corpus(const DocumentSet& docs, const PriceMap& prices,
                          const PriceSeries& market, double min_price,
                          FilterStats* stats = nullptr);

// First floor(train_fraction * n) documents train, remainder test.
std::pair<DocumentSet, DocumentSet> chronological_split(const DocumentSet& docs,
                                                        double train_fraction);

// Deterministic planted-signal corpus for desk-scale verification.
// keyword mode plants "gaintok"/"losstok"; negation mode additionally plants
// "not" directly before the signal token, flipping the sign, so that unigram
// bag-of-words cannot separate the classes while word order can.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Tokens the generator treats as signal carriers.
inline const char* kGainToken = "gaintok";
inline const char* kLossToken = "losstok";
inline const char* kNegToken = "not";

// Ground-truth rule of the negation generator: positive iff the signal token
// is gaintok and not negated, or losstok and negated. Used as the order-aware
// oracle in tests.
int negation_oracle_label(const std::vector<std::string>& tokens);

}  // namespace fintext
