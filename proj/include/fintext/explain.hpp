#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fintext/corpus.hpp"
#include "fintext/seqnet.hpp"
#include "fintext/textproc.hpp"

namespace fintext {

struct PolarityRow {
    std::string entry;
    std::string label;  // optional dictionary label, empty when unknown
    bool in_vocab = true;
    double raw_score = 0.0;
    double z_score = 0.0;
};

struct PolarityTable {
    std::vector<PolarityRow> rows;
    bool degenerate = false;  // all raw scores equal, z-scores reported as 0
};

// Scores each word as a single-token document through the model. z-scores
// use the population standard deviation over the scored rows.
PolarityTable word_polarity(const SeqModel& model, const std::vector<std::string>& words,
                            const Vocabulary& vocab, bool stemming,
                            const std::map<std::string, std::string>& dictionary_labels = {});

void save_polarity_csv(const PolarityTable& table, const std::string& path,
                       const std::string& header_comment = "");

// `entry,label` CSV, e.g. a Loughran-McDonald export.
std::map<std::string, std::string> load_dictionary_csv(const std::string& path);

struct TruncationMode {
    enum class Kind { first_sentence, first_k, full };
    Kind kind = Kind::full;
    int k = 0;

    std::string name() const;
};

struct SweepRow {
    std::string mode;
    std::string metric;
    double value = 0.0;
    size_t skipped_docs = 0;
};

struct SweepData {
    std::vector<Document> train_docs;
    std::vector<double> train_targets;
    std::vector<Document> test_docs;
    std::vector<double> test_targets;
};

// Trains and evaluates on the truncated corpora; returns the metric value.
using SweepModelFn =
    std::function<double(const std::vector<TokenSeq>& train, const std::vector<double>& y_train,
                         const std::vector<TokenSeq>& test, const std::vector<double>& y_test)>;

// One row per mode in declared order. Documents whose truncation is empty
// are skipped and counted.
std::vector<SweepRow> truncation_sweep(const SweepData& data, const SweepModelFn& model_fn,
                                       const std::vector<TruncationMode>& modes,
                                       const std::string& metric_name);

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                    const std::string& header_comment = "");

// Tokens of the document truncated per mode. first_sentence cuts the raw
// text at the first '.', '!' or '?' before tokenization.
TokenSeq truncate_document(const Document& doc, const TruncationMode& mode);

}  // namespace fintext
