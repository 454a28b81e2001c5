#include "fintext/pipeline.hpp"

#include <fstream>
#include <stdexcept>

#include "fintext/datetime.hpp"

namespace fintext {

namespace {

// Paired daily returns of one stock against the market, for dates strictly
// before `event_date`. Requires consecutive points in both series.
std::vector<ReturnObservation> pre_event_observations(const PriceSeries& stock,
                                                      const PriceSeries& market,
                                                      int64_t event_date) {
    std::vector<ReturnObservation> obs;
    for (size_t i = 1; i < stock.points.size(); ++i) {
        const int64_t d = stock.points[i].date;
        if (d >= event_date) break;
        if (market.at(d) == nullptr || market.last_before(d) == nullptr) continue;
        ReturnObservation o;
        o.date = d;
        o.stock_return = log_return(stock, d);
        o.market_return = log_return(market, d);
        obs.push_back(o);
    }
    return obs;
}

}  // namespace

LabeledCorpus label_corpus(const DocumentSet& docs, const PriceMap& prices,
                           const PriceSeries& market, int window) {
    LabeledCorpus lc;
    for (const auto& doc : docs.docs) {
        const auto it = prices.find(doc.ticker);
        if (it == prices.end()) {
            ++lc.skipped;
            continue;
        }
        const PriceSeries& stock = it->second;
        const int64_t date = timestamp_date(doc.timestamp);
        const auto obs = pre_event_observations(stock, market, date);
        if (static_cast<int>(obs.size()) < window || stock.at(date) == nullptr ||
            stock.last_before(date) == nullptr || market.at(date) == nullptr ||
            market.last_before(date) == nullptr) {
            ++lc.skipped;
            continue;
        }
        MarketModel model;
        try {
            model = estimate_market_model(obs, window);
        } catch (const std::exception&) {
            ++lc.skipped;
            continue;
        }
        const double r = log_return(stock, date);
        const double rm = log_return(market, date);
        const double ar = abnormal_return(r, rm, model);
        lc.docs.docs.push_back(doc);
        lc.nominal.push_back(r);
        lc.abnormal.push_back(ar);
        lc.class_nominal.push_back(make_label(r).cls);
        lc.class_abnormal.push_back(make_label(ar).cls);
    }
    return lc;
}

void save_label_csv(const LabeledCorpus& lc, const std::string& path,
                    const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "id,date,nominal_return,abnormal_return,class_nominal,class_abnormal\n";
    for (size_t i = 0; i < lc.docs.size(); ++i) {
        out << lc.docs.docs[i].id << ',' << format_date(timestamp_date(lc.docs.docs[i].timestamp))
            << ',' << lc.nominal[i] << ',' << lc.abnormal[i] << ',' << lc.class_nominal[i] << ','
            << lc.class_abnormal[i] << '\n';
    }
}

std::vector<TokenSeq> tokenize_documents(const DocumentSet& docs) {
    std::vector<TokenSeq> out;
    out.reserve(docs.size());
    for (const auto& d : docs.docs) out.push_back(tokenize(d.text));
    return out;
}

std::vector<LabeledSequence> make_sequences(const std::vector<TokenSeq>& docs,
                                            const std::vector<double>& targets,
                                            const Vocabulary& vocab, int max_len, bool stemming,
                                            std::vector<size_t>* kept) {
    if (docs.size() != targets.size()) {
        throw std::invalid_argument("make_sequences: document/target size mismatch");
    }
    std::vector<LabeledSequence> out;
    for (size_t i = 0; i < docs.size(); ++i) {
        LabeledSequence ls;
        try {
            ls.tokens = encode_sequence(docs[i], vocab, max_len, stemming);
        } catch (const std::exception&) {
            continue;  // document fully out of vocabulary
        }
        ls.target = targets[i];
        out.push_back(std::move(ls));
        if (kept != nullptr) kept->push_back(i);
    }
    return out;
}

}  // namespace fintext
