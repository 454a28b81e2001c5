#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fintext/corpus.hpp"
#include "fintext/datetime.hpp"
#include "fintext/pipeline.hpp"
#include "fintext/textproc.hpp"

using namespace fintext;
namespace fs = std::filesystem;

TEST_CASE("label_corpus recovers the planted labels") {
    SyntheticSpec spec;
    spec.n_docs = 60;
    spec.signal_strength = 1.0;
    spec.seed = 19;
    const auto corpus = generate_synthetic(spec);
    const auto lc = label_corpus(corpus.docs, corpus.prices, corpus.market);
    REQUIRE(lc.docs.size() == corpus.docs.size());
    CHECK(lc.skipped == 0);
    for (size_t i = 0; i < lc.docs.size(); ++i) {
        CHECK(lc.class_nominal[i] == corpus.true_labels[i]);
        CHECK(lc.class_abnormal[i] == corpus.true_labels[i]);
        CHECK((lc.nominal[i] > 0) == (corpus.true_labels[i] == 1));
        CHECK((lc.abnormal[i] > 0) == (corpus.true_labels[i] == 1));
    }
}

TEST_CASE("label_corpus skips documents without history") {
    SyntheticSpec spec;
    spec.n_docs = 10;
    spec.seed = 4;
    auto corpus = generate_synthetic(spec);
    // Sabotage one ticker: drop everything but the event-day close.
    auto& series = corpus.prices.at(corpus.docs.docs[0].ticker);
    series.points.erase(series.points.begin(), series.points.end() - 1);
    const auto lc = label_corpus(corpus.docs, corpus.prices, corpus.market);
    CHECK(lc.docs.size() == 9);
    CHECK(lc.skipped == 1);

    // Unknown ticker is skipped too.
    corpus.docs.docs[1].ticker = "UNKNOWN";
    const auto lc2 = label_corpus(corpus.docs, corpus.prices, corpus.market);
    CHECK(lc2.skipped == 2);
}

TEST_CASE("label CSV format") {
    SyntheticSpec spec;
    spec.n_docs = 6;
    spec.seed = 2;
    const auto corpus = generate_synthetic(spec);
    const auto lc = label_corpus(corpus.docs, corpus.prices, corpus.market);
    const auto path = fs::temp_directory_path() / "fintext_labels_test.csv";
    save_label_csv(lc, path.string(), "hash=z seed=2");

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# hash=z seed=2");
    std::getline(in, line);
    CHECK(line == "id,date,nominal_return,abnormal_return,class_nominal,class_abnormal");
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 6);
        CHECK((cells[4] == "0" || cells[4] == "1"));
    }
    CHECK(rows == lc.docs.size());
    fs::remove(path);
}

TEST_CASE("tokenize_documents and make_sequences") {
    DocumentSet docs;
    Document a;
    a.id = "a";
    a.timestamp = 1;
    a.text = "gain loss gain";
    Document b;
    b.id = "b";
    b.timestamp = 2;
    b.text = "entirely unknown words";
    docs.docs = {a, b};

    const auto tokens = tokenize_documents(docs);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].tokens == std::vector<std::string>{"gain", "loss", "gain"});

    std::vector<TokenSeq> train{tokens[0]};
    const auto vocab = build_vocabulary(train, 1, false, kAllFeatures);
    std::vector<size_t> kept;
    const auto seqs = make_sequences(tokens, {1.0, 0.0}, vocab, 100, false, &kept);
    REQUIRE(seqs.size() == 1);  // the fully out-of-vocabulary doc is dropped
    CHECK(kept == std::vector<size_t>{0});
    CHECK(seqs[0].target == 1.0);
    CHECK(seqs[0].tokens.size() == 3);

    CHECK_THROWS(make_sequences(tokens, {1.0}, vocab, 100, false));  // size mismatch
}
