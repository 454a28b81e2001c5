#include "fintext/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace fintext {

TokenSeq tokenize(const std::string& text) {
    // Words are whitespace-delimited; a word containing any digit is dropped
    // entirely (e.g. "fy2016"), otherwise punctuation splits it further.
    TokenSeq out;
    std::string cur;
    bool word_has_digit = false;
    auto emit = [&] {
        if (!cur.empty() && !word_has_digit) out.tokens.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            emit();
            word_has_digit = false;
        } else if (std::isdigit(c)) {
            word_has_digit = true;
            cur.clear();
        } else if (std::isalpha(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            emit();
        }
    }
    emit();
    return out;
}

std::vector<std::string> ngrams(const TokenSeq& tokens, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::string> out;
    const int m = static_cast<int>(tokens.size());
    if (m < n) return out;
    out.reserve(static_cast<size_t>(m - n + 1));
    for (int i = 0; i + n <= m; ++i) {
        std::string g = tokens.tokens[static_cast<size_t>(i)];
        for (int k = 1; k < n; ++k) {
            g.push_back('_');
            g += tokens.tokens[static_cast<size_t>(i + k)];
        }
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

std::vector<std::string> doc_grams(const TokenSeq& doc, int n, bool stemming) {
    if (!stemming) return ngrams(doc, n);
    TokenSeq stemmed;
    stemmed.tokens.reserve(doc.size());
    for (const auto& t : doc.tokens) stemmed.tokens.push_back(porter_stem(t));
    return ngrams(stemmed, n);
}

}  // namespace

Vocabulary build_vocabulary(const std::vector<TokenSeq>& docs, int n, bool stemming,
                            int64_t n_max) {
    if (docs.empty()) throw std::invalid_argument("cannot build vocabulary from no documents");
    if (n_max == 0) throw std::invalid_argument("n_max must be positive or kAllFeatures");

    struct Freq {
        int64_t corpus = 0;
        int64_t doc = 0;
    };
    std::map<std::string, Freq> freq;  // ordered map gives the lexicographic tie-break
    for (const auto& doc : docs) {
        std::map<std::string, int64_t> counts;
        for (auto& g : doc_grams(doc, n, stemming)) ++counts[g];
        for (const auto& [term, c] : counts) {
            auto& f = freq[term];
            f.corpus += c;
            f.doc += 1;
        }
    }

    std::vector<std::pair<std::string, Freq>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second.corpus > b.second.corpus;  // ties keep lexicographic order
    });
    if (n_max != kAllFeatures && static_cast<int64_t>(ranked.size()) > n_max) {
        ranked.resize(static_cast<size_t>(n_max));
    }

    Vocabulary vocab;
    vocab.ngram = n;
    vocab.stemming = stemming;
    vocab.terms.reserve(ranked.size());
    for (const auto& [term, f] : ranked) {
        vocab.index.emplace(term, static_cast<int>(vocab.terms.size()));
        vocab.terms.push_back(term);
        vocab.doc_freq.push_back(f.doc);
        vocab.corpus_freq.push_back(f.corpus);
    }
    return vocab;
}

FeatureMatrix tfidf_featurize(const std::vector<TokenSeq>& docs, const Vocabulary& vocab) {
    FeatureMatrix m;
    m.rows = static_cast<int>(docs.size());
    m.cols = vocab.size();
    m.entries.resize(docs.size());
    const double n_docs = static_cast<double>(docs.size());
    for (size_t r = 0; r < docs.size(); ++r) {
        std::map<int, double> tf;
        for (auto& g : doc_grams(docs[r], vocab.ngram, vocab.stemming)) {
            const int idx = vocab.lookup(g);
            if (idx >= 0) tf[idx] += 1.0;
        }
        double norm_sq = 0.0;
        auto& row = m.entries[r];
        row.reserve(tf.size());
        for (const auto& [idx, count] : tf) {
            const double df = static_cast<double>(vocab.doc_freq[static_cast<size_t>(idx)]);
            const double w = count * (std::log((1.0 + n_docs) / (1.0 + df)) + 1.0);
            row.emplace_back(idx, w);
            norm_sq += w * w;
        }
        if (norm_sq > 0) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [idx, w] : row) w *= inv;
        }
    }
    return m;
}

std::vector<int> encode_sequence(const TokenSeq& doc, const Vocabulary& vocab, int max_len,
                                 bool stemming) {
    if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    if (stemming != vocab.stemming) {
        throw std::invalid_argument("stemming flag does not match the vocabulary");
    }
    std::vector<int> out;
    for (const auto& t : doc.tokens) {
        const int idx = vocab.lookup(stemming ? porter_stem(t) : t);
        if (idx >= 0) {
            out.push_back(idx);
            if (static_cast<int>(out.size()) == max_len) break;
        }
    }
    if (out.empty()) throw std::runtime_error("encoded sequence is empty");
    return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& t : vocab.terms) out << t << '\n';
}

void save_feature_matrix(const FeatureMatrix& m, const Vocabulary& vocab,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "row,term,weight\n";
    for (int r = 0; r < m.rows; ++r) {
        for (const auto& [idx, w] : m.entries[static_cast<size_t>(r)]) {
            out << r << ',' << vocab.terms[static_cast<size_t>(idx)] << ',' << w << '\n';
        }
    }
}

}  // namespace fintext
