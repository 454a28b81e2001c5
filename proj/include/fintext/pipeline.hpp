#pragma once

#include <string>
#include <vector>

#include "fintext/corpus.hpp"
#include "fintext/markets.hpp"
#include "fintext/seqnet.hpp"
#include "fintext/textproc.hpp"

namespace fintext {

// Documents joined with their event-day nominal and abnormal returns.
struct LabeledCorpus {
    DocumentSet docs;
    std::vector<double> nominal;   // percent
    std::vector<double> abnormal;  // percent
    std::vector<int> class_nominal;
    std::vector<int> class_abnormal;
    size_t skipped = 0;  // documents without enough price history
};

// Market-model window estimation ends the day before the disclosure.
LabeledCorpus label_corpus(const DocumentSet& docs, const PriceMap& prices,
                           const PriceSeries& market, int window = 20);

// CSV `id,date,nominal_return,abnormal_return,class_nominal,class_abnormal`.
void save_label_csv(const LabeledCorpus& lc, const std::string& path,
                    const std::string& header_comment = "");

std::vector<TokenSeq> tokenize_documents(const DocumentSet& docs);

// Encodes documents to labeled token-index sequences; documents that encode
// empty are dropped, with `kept` reporting surviving source indices.
std::vector<LabeledSequence> make_sequences(const std::vector<TokenSeq>& docs,
                                            const std::vector<double>& targets,
                                            const Vocabulary& vocab, int max_len, bool stemming,
                                            std::vector<size_t>* kept = nullptr);

}  // namespace fintext
