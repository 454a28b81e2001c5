#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fintext {

// Lowercase alphabetic tokens in original word order.
struct TokenSeq {
    std::vector<std::string> tokens;

    size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
};

// Lowercases, splits on non-alphabetic characters, drops tokens that
// contained a digit.
TokenSeq tokenize(const std::string& text);

// Porter (1980) stem of a lowercase alphabetic token.
std::string porter_stem(const std::string& token);

// Contiguous n-token windows joined by '_'; empty when the sequence is
// shorter than n.
std::vector<std::string> ngrams(const TokenSeq& tokens, int n);

constexpr int64_t kAllFeatures = -1;

struct Vocabulary {
    std::vector<std::string> terms;  // index order = rank order
    std::unordered_map<std::string, int> index;
    std::vector<int64_t> doc_freq;     // aligned with terms
    std::vector<int64_t> corpus_freq;  // aligned with terms
    int ngram = 1;
    bool stemming = false;

    int size() const { return static_cast<int>(terms.size()); }
    int lookup(const std::string& term) const {
        auto it = index.find(term);
        return it == index.end() ? -1 : it->second;
    }
};

// Terms ranked by corpus frequency descending, ties lexicographic ascending;
// top n_max retained (kAllFeatures keeps everything).
Vocabulary build_vocabulary(const std::vector<TokenSeq>& docs, int n, bool stemming,
                            int64_t n_max);

// Sparse tf-idf matrix; each row L2-normalized (or all-zero).
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    // Per row: (term index, weight), term indices strictly increasing.
    std::vector<std::vector<std::pair<int, double>>> entries;
};

// weight(t,d) = tf(t,d) * (ln((1+N)/(1+df(t))) + 1), rows L2-normalized.
FeatureMatrix tfidf_featurize(const std::vector<TokenSeq>& docs, const Vocabulary& vocab);

// In-vocabulary token indices in order, truncated to max_len. Throws when
// the encoded sequence would be empty.
std::vector<int> encode_sequence(const TokenSeq& doc, const Vocabulary& vocab, int max_len,
                                 bool stemming);

// Debug exports: vocabulary one term per line; matrix as (row,term,weight).
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
void save_feature_matrix(const FeatureMatrix& m, const Vocabulary& vocab,
                         const std::string& path);

}  // namespace fintext
