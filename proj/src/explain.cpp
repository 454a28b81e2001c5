#include "fintext/explain.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fintext {

PolarityTable word_polarity(const SeqModel& model, const std::vector<std::string>& words,
                            const Vocabulary& vocab, bool stemming,
                            const std::map<std::string, std::string>& dictionary_labels) {
    PolarityTable table;
    std::vector<size_t> scored;
    for (const auto& word : words) {
        PolarityRow row;
        row.entry = word;
        if (auto it = dictionary_labels.find(word); it != dictionary_labels.end()) {
            row.label = it->second;
        }
        TokenSeq toks = tokenize(word);
        int idx = -1;
        if (!toks.empty()) {
            const std::string t = stemming ? porter_stem(toks.tokens[0]) : toks.tokens[0];
            idx = vocab.lookup(t);
        }
        if (idx < 0) {
            row.in_vocab = false;
        } else {
            row.raw_score = seq_forward(model, {idx});
            scored.push_back(table.rows.size());
        }
        table.rows.push_back(std::move(row));
    }
    if (scored.empty()) throw std::runtime_error("word_polarity: all words out of vocabulary");

    double mean = 0.0;
    for (size_t i : scored) mean += table.rows[i].raw_score;
    mean /= static_cast<double>(scored.size());
    double var = 0.0;
    for (size_t i : scored) {
        const double d = table.rows[i].raw_score - mean;
        var += d * d;
    }
    var /= static_cast<double>(scored.size());
    const double std_dev = std::sqrt(var);
    if (std_dev == 0.0) {
        table.degenerate = true;  // z-scores stay 0
        return table;
    }
    for (size_t i : scored) {
        table.rows[i].z_score = (table.rows[i].raw_score - mean) / std_dev;
    }
    return table;
}

void save_polarity_csv(const PolarityTable& table, const std::string& path,
                       const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "entry,label,raw_score,z_score\n";
    for (const auto& r : table.rows) {
        if (!r.in_vocab) {
            out << r.entry << ',' << r.label << ",missing,missing\n";
        } else {
            out << r.entry << ',' << r.label << ',' << r.raw_score << ',' << r.z_score << '\n';
        }
    }
}

std::map<std::string, std::string> load_dictionary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dictionary '" + path + "'");
    std::map<std::string, std::string> dict;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("malformed dictionary row in '" + path + "'");
        }
        dict[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return dict;
}

std::string TruncationMode::name() const {
    switch (kind) {
        case Kind::first_sentence:
            return "first_sentence";
        case Kind::first_k:
            return "first_" + std::to_string(k);
        case Kind::full:
            return "full";
    }
    return "?";
}

TokenSeq truncate_document(const Document& doc, const TruncationMode& mode) {
    switch (mode.kind) {
        case TruncationMode::Kind::first_sentence: {
            const auto cut = doc.text.find_first_of(".!?");
            return tokenize(cut == std::string::npos ? doc.text : doc.text.substr(0, cut));
        }
        case TruncationMode::Kind::first_k: {
            TokenSeq toks = tokenize(doc.text);
            if (static_cast<int>(toks.size()) > mode.k) {
                toks.tokens.resize(static_cast<size_t>(mode.k));
            }
            return toks;
        }
        case TruncationMode::Kind::full:
            return tokenize(doc.text);
    }
    return {};
}

std::vector<SweepRow> truncation_sweep(const SweepData& data, const SweepModelFn& model_fn,
                                       const std::vector<TruncationMode>& modes,
                                       const std::string& metric_name) {
    if (modes.empty()) throw std::invalid_argument("truncation_sweep: no modes");
    std::vector<SweepRow> rows;
    for (const auto& mode : modes) {
        size_t skipped = 0;
        std::vector<TokenSeq> train, test;
        std::vector<double> y_train, y_test;
        for (size_t i = 0; i < data.train_docs.size(); ++i) {
            TokenSeq t = truncate_document(data.train_docs[i], mode);
            if (t.empty()) {
                ++skipped;
                continue;
            }
            train.push_back(std::move(t));
            y_train.push_back(data.train_targets[i]);
        }
        for (size_t i = 0; i < data.test_docs.size(); ++i) {
            TokenSeq t = truncate_document(data.test_docs[i], mode);
            if (t.empty()) {
                ++skipped;
                continue;
            }
            test.push_back(std::move(t));
            y_test.push_back(data.test_targets[i]);
        }
        SweepRow row;
        row.mode = mode.name();
        row.metric = metric_name;
        row.value = model_fn(train, y_train, test, y_test);
        row.skipped_docs = skipped;
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                    const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "mode,metric,value,skipped_docs\n";
    for (const auto& r : rows) {
        out << r.mode << ',' << r.metric << ',' << r.value << ',' << r.skipped_docs << '\n';
    }
}

}  // namespace fintext
