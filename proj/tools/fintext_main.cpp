// fintext command-line interface: end-to-end disclosure-to-return pipeline.
//
// Subcommands: gensynth, ingest, tune, train, evaluate, explain, sweep,
// portfolio. Options may come from a flat JSON config file (--config);
// command-line flags take precedence over file values. Every artifact records
// the resolved config hash and the seed; identical config + seed + --jobs 1
// reproduces outputs byte for byte.

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fintext/corpus.hpp"
#include "fintext/datetime.hpp"
#include "fintext/eval.hpp"
#include "fintext/explain.hpp"
#include "fintext/linear.hpp"
#include "fintext/markets.hpp"
#include "fintext/pipeline.hpp"
#include "fintext/seqnet.hpp"
#include "fintext/tensor.hpp"
#include "fintext/textproc.hpp"

namespace ft = fintext;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// config plumbing

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const json& cfg) {
    // The output location does not change what a run computes, so it is not
    // part of the configuration identity.
    json canon = cfg;
    canon.erase("out");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canon.dump())));
    return buf;
}

// `--config file` (or --config=file) is resolved before CLI11 parsing so file
// values become option defaults, letting explicit flags override them.
json load_config_file(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            path = argv[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        }
    }
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json j = json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config file must hold a flat JSON object");
    return j;
}

template <typename T>
void cfg_default(const json& cfg, const std::string& key, T& var) {
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

std::string artifact_header(const json& cfg, uint64_t seed) {
    return "config_hash=" + config_hash(cfg) + " seed=" + std::to_string(seed);
}

void echo_run(const std::string& command, const json& cfg, uint64_t seed) {
    json out{{"command", command},
             {"config", cfg},
             {"config_hash", config_hash(cfg)},
             {"seed", seed}};
    std::cout << out.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// shared option bundles

struct DataOpts {
    std::string docs, prices, market;
    double min_price = 5.0;
    double train_fraction = 0.8;
    std::string task = "classify";   // classify | regress
    std::string target = "abnormal"; // nominal | abnormal
};

struct TextOpts {
    bool stemming = false;
    int ngram = 1;
    int64_t n_max = -1;  // -1 keeps all features
    int max_len = -1;    // sequence truncation, -1 keeps everything
};

struct ModelOpts {
    std::string model = "lstm";  // majority|ridge|lasso|elastic_net|rnn|lstm
    double lambda = 0.1;
    double l1_ratio = 0.5;
    int embedding_dim = 30;
    bool tanh_output = false;
    double lr = 0.001;
    int epochs = 10;
    int batch_size = 8;
    std::string embeddings_file;  // pretrained word vectors, lstm only
    std::string pretrain;         // source checkpoint, rnn/lstm only
};

bool is_seq_model(const std::string& m) { return m == "rnn" || m == "lstm"; }

void add_data_options(CLI::App* cmd, DataOpts& d, const json& cfg) {
    cfg_default(cfg, "docs", d.docs);
    cfg_default(cfg, "prices", d.prices);
    cfg_default(cfg, "market", d.market);
    cfg_default(cfg, "min_price", d.min_price);
    cfg_default(cfg, "train_fraction", d.train_fraction);
    cfg_default(cfg, "task", d.task);
    cfg_default(cfg, "target", d.target);
    cmd->add_option("--docs", d.docs, "disclosure corpus (JSON lines)");
    cmd->add_option("--prices", d.prices, "per-ticker price CSV");
    cmd->add_option("--market", d.market, "market index CSV");
    cmd->add_option("--min-price", d.min_price, "penny-stock cutoff");
    cmd->add_option("--train-fraction", d.train_fraction, "chronological train share");
    cmd->add_option("--task", d.task)->check(CLI::IsMember({"classify", "regress"}));
    cmd->add_option("--target", d.target)->check(CLI::IsMember({"nominal", "abnormal"}));
}

void add_text_options(CLI::App* cmd, TextOpts& t, const json& cfg) {
    cfg_default(cfg, "stemming", t.stemming);
    cfg_default(cfg, "ngram", t.ngram);
    cfg_default(cfg, "n_max", t.n_max);
    cfg_default(cfg, "max_len", t.max_len);
    cmd->add_flag("--stemming,!--no-stemming", t.stemming, "apply the stemmer");
    cmd->add_option("--ngram", t.ngram, "n-gram order for bag-of-words features");
    cmd->add_option("--n-max", t.n_max, "vocabulary cap (-1 = all)");
    cmd->add_option("--max-len", t.max_len, "sequence length cap (-1 = all)");
}

void add_model_options(CLI::App* cmd, ModelOpts& m, const json& cfg) {
    cfg_default(cfg, "model", m.model);
    cfg_default(cfg, "lambda", m.lambda);
    cfg_default(cfg, "l1_ratio", m.l1_ratio);
    cfg_default(cfg, "embedding_dim", m.embedding_dim);
    cfg_default(cfg, "tanh_output", m.tanh_output);
    cfg_default(cfg, "lr", m.lr);
    cfg_default(cfg, "epochs", m.epochs);
    cfg_default(cfg, "batch_size", m.batch_size);
    cfg_default(cfg, "embeddings", m.embeddings_file);
    cfg_default(cfg, "pretrain", m.pretrain);
    cmd->add_option("--model", m.model)
        ->check(CLI::IsMember({"majority", "ridge", "lasso", "elastic_net", "rnn", "lstm"}));
    cmd->add_option("--lambda", m.lambda, "regularization strength");
    cmd->add_option("--l1-ratio", m.l1_ratio, "elastic-net mixing (1 = lasso)");
    cmd->add_option("--embedding-dim", m.embedding_dim);
    cmd->add_flag("--tanh-output", m.tanh_output, "conventional h = o * tanh(c)");
    cmd->add_option("--lr", m.lr, "learning rate");
    cmd->add_option("--epochs", m.epochs);
    cmd->add_option("--batch-size", m.batch_size);
    cmd->add_option("--embeddings", m.embeddings_file, "pretrained word-vector file");
    cmd->add_option("--pretrain", m.pretrain, "source checkpoint for transfer");
}

void check_model_invariants(const ModelOpts& m) {
    if (!m.pretrain.empty() && !is_seq_model(m.model)) {
        throw std::runtime_error("--pretrain is only valid for rnn/lstm models");
    }
    if (!m.embeddings_file.empty() && m.model != "lstm") {
        throw std::runtime_error("--embeddings is only valid for the lstm model");
    }
}

json data_config(const DataOpts& d) {
    return {{"docs", d.docs},     {"prices", d.prices},
            {"market", d.market}, {"min_price", d.min_price},
            {"train_fraction", d.train_fraction}, {"task", d.task},
            {"target", d.target}};
}

json text_config(const TextOpts& t) {
    return {{"stemming", t.stemming}, {"ngram", t.ngram}, {"n_max", t.n_max},
            {"max_len", t.max_len}};
}

json model_config(const ModelOpts& m) {
    return {{"model", m.model},
            {"lambda", m.lambda},
            {"l1_ratio", m.l1_ratio},
            {"embedding_dim", m.embedding_dim},
            {"tanh_output", m.tanh_output},
            {"lr", m.lr},
            {"epochs", m.epochs},
            {"batch_size", m.batch_size},
            {"embeddings", m.embeddings_file},
            {"pretrain", m.pretrain}};
}

// ---------------------------------------------------------------------------
// dataset assembly

struct Dataset {
    ft::LabeledCorpus lc;
    std::vector<ft::TokenSeq> tokens;
    std::vector<double> targets;  // {0,1} classes or percent returns
    std::vector<int> classes;
    size_t n_train = 0;
    ft::FilterStats stats;
};

Dataset load_dataset(const DataOpts& d) {
    if (d.docs.empty() || d.prices.empty() || d.market.empty()) {
        throw std::runtime_error("--docs, --prices and --market are required");
    }
    const auto docs = ft::load_documents(d.docs);
    const auto prices = ft::load_prices_csv(d.prices);
    const auto market = ft::load_market_csv(d.market);
    Dataset ds;
    const auto filtered = ft::filter_corpus(docs, prices, market, d.min_price, &ds.stats);
    ds.lc = ft::label_corpus(filtered, prices, market);
    if (ds.lc.docs.empty()) throw std::runtime_error("no labelable documents after filtering");
    const bool abnormal = d.target == "abnormal";
    ds.classes = abnormal ? ds.lc.class_abnormal : ds.lc.class_nominal;
    if (d.task == "classify") {
        ds.targets.assign(ds.classes.begin(), ds.classes.end());
    } else {
        ds.targets = abnormal ? ds.lc.abnormal : ds.lc.nominal;
    }
    ds.tokens = ft::tokenize_documents(ds.lc.docs);
    ds.n_train = static_cast<size_t>(std::floor(d.train_fraction *
                                                static_cast<double>(ds.lc.docs.size())));
    if (ds.n_train == 0 || ds.n_train >= ds.lc.docs.size()) {
        throw std::runtime_error("train fraction leaves an empty split");
    }
    return ds;
}

template <typename T>
std::vector<T> slice(const std::vector<T>& v, size_t begin, size_t end) {
    return std::vector<T>(v.begin() + static_cast<long>(begin),
                          v.begin() + static_cast<long>(end));
}

// ---------------------------------------------------------------------------
// model fitting shared by tune / train / evaluate / sweep

struct FittedLinear {
    ft::Vocabulary vocab;
    ft::LinearModel model;
};

FittedLinear fit_linear(const std::vector<ft::TokenSeq>& tokens,
                        const std::vector<double>& targets, const ModelOpts& mo,
                        const TextOpts& to) {
    FittedLinear f;
    if (mo.model == "majority") {
        std::vector<int> labels(targets.size());
        std::transform(targets.begin(), targets.end(), labels.begin(),
                       [](double t) { return t > 0.5 ? 1 : 0; });
        f.model = ft::fit_majority(labels);
        return f;
    }
    f.vocab = ft::build_vocabulary(tokens, to.ngram, to.stemming, to.n_max);
    const auto X = ft::tfidf_featurize(tokens, f.vocab);
    if (mo.model == "ridge") {
        f.model = ft::fit_ridge(X, targets, mo.lambda);
    } else if (mo.model == "lasso") {
        f.model = ft::fit_lasso(X, targets, mo.lambda);
    } else {
        f.model = ft::fit_elastic_net(X, targets, mo.lambda, mo.l1_ratio);
    }
    return f;
}

std::vector<double> predict_linear_docs(const FittedLinear& f,
                                        const std::vector<ft::TokenSeq>& tokens) {
    if (f.model.kind == ft::LinearKind::majority) {
        return std::vector<double>(tokens.size(), f.model.intercept);
    }
    return ft::predict_linear(f.model, ft::tfidf_featurize(tokens, f.vocab));
}

struct FittedSeq {
    ft::Vocabulary vocab;
    ft::SeqModel model;
    ft::TrainReport report;
};

int effective_max_len(const TextOpts& to) { return to.max_len <= 0 ? INT_MAX : to.max_len; }

FittedSeq fit_seq(const std::vector<ft::TokenSeq>& tokens, const std::vector<double>& targets,
                  const std::string& task, const ModelOpts& mo, const TextOpts& to,
                  uint64_t seed) {
    FittedSeq f;
    f.vocab = ft::build_vocabulary(tokens, 1, to.stemming, to.n_max);
    ft::SeqModelConfig cfg;
    cfg.cell = mo.model == "rnn" ? ft::CellKind::rnn : ft::CellKind::lstm;
    cfg.task = task == "classify" ? ft::TaskKind::classification : ft::TaskKind::regression;
    cfg.tanh_output = mo.tanh_output;
    cfg.embedding_dim = mo.embedding_dim;
    ft::Rng rng(seed);
    if (!mo.pretrain.empty()) {
        f.model = ft::transfer_init(f.vocab.terms, mo.pretrain, rng);
        f.model.config.task = cfg.task;  // fine-tuning may switch the head task
    } else {
        f.model = ft::init_seq_model(cfg, f.vocab.terms, rng);
    }
    if (!mo.embeddings_file.empty()) {
        f.model.embedding =
            ft::load_pretrained_embeddings(mo.embeddings_file, f.vocab,
                                           f.model.config.embedding_dim, rng);
    }
    const auto data =
        ft::make_sequences(tokens, targets, f.vocab, effective_max_len(to), to.stemming);
    if (data.empty()) throw std::runtime_error("no trainable sequences after encoding");
    ft::TrainOptions opts;
    opts.loss = cfg.task == ft::TaskKind::classification ? ft::LossKind::bce : ft::LossKind::mse;
    opts.epochs = mo.epochs;
    opts.batch_size = mo.batch_size;
    opts.learning_rate = mo.lr;
    opts.seed = seed;
    f.report = ft::train(f.model, data, opts);
    return f;
}

// Scores documents through a sequence model; documents that encode empty are
// dropped together with their targets/classes (kept reports survivors).
std::vector<double> predict_seq_docs(const ft::SeqModel& model, const ft::Vocabulary& vocab,
                                     const std::vector<ft::TokenSeq>& tokens, int max_len,
                                     bool stemming, std::vector<size_t>& kept) {
    std::vector<double> scores;
    for (size_t i = 0; i < tokens.size(); ++i) {
        std::vector<int> seq;
        try {
            seq = ft::encode_sequence(tokens[i], vocab, max_len, stemming);
        } catch (const std::exception&) {
            continue;
        }
        scores.push_back(ft::seq_forward(model, seq));
        kept.push_back(i);
    }
    return scores;
}

json metrics_json(const std::vector<double>& scores, const std::vector<double>& targets,
                  const std::vector<int>& classes, bool classify, bool train_side) {
    json j;
    if (classify) {
        const auto r = ft::classification_metrics(scores, classes);
        j["accuracy"] = r.accuracy;
        if (!train_side) {
            j["balanced_accuracy"] = r.balanced_accuracy;
            j["auc"] = r.auc;
            j["auc_defined"] = r.auc_defined;
        }
    } else {
        const auto r = ft::regression_metrics(scores, targets);
        j["rmse"] = r.rmse;
        j["mse"] = r.mse;
        j["mae"] = r.mae;
    }
    return j;
}

// Evaluates one side (train or test) of the split for any model family.
json evaluate_side(const DataOpts& d, const TextOpts& to, const FittedLinear* lin,
                   const FittedSeq* seq, const std::vector<ft::TokenSeq>& tokens,
                   const std::vector<double>& targets, const std::vector<int>& classes,
                   bool train_side) {
    const bool classify = d.task == "classify";
    if (lin != nullptr) {
        const auto scores = predict_linear_docs(*lin, tokens);
        return metrics_json(scores, targets, classes, classify, train_side);
    }
    std::vector<size_t> kept;
    const auto scores = predict_seq_docs(seq->model, seq->vocab, tokens, effective_max_len(to),
                                         to.stemming, kept);
    if (scores.empty()) throw std::runtime_error("no scorable documents in evaluation split");
    std::vector<double> t;
    std::vector<int> c;
    for (size_t i : kept) {
        t.push_back(targets[i]);
        c.push_back(classes[i]);
    }
    json j = metrics_json(scores, t, c, classify, train_side);
    if (kept.size() != tokens.size()) {
        j["skipped_docs"] = tokens.size() - kept.size();
    }
    return j;
}

// ---------------------------------------------------------------------------
// tuning grids

std::vector<double> default_lambda_grid() {
    std::vector<double> g{1.0, 0.99, 0.95};
    for (int i = 18; i >= 2; --i) g.push_back(i * 0.05);  // 0.9 down to 0.1
    g.push_back(0.05);
    g.push_back(0.01);
    return g;
}

std::vector<double> default_lr_grid() {
    std::vector<double> g{0.0001};
    for (int i = 1; i <= 19; ++i) g.push_back(i * 0.0005);  // 0.0005 .. 0.0095
    g.push_back(0.01);
    return g;
}

ft::ParamGrid default_grid(const std::string& model) {
    ft::ParamGrid grid;
    if (is_seq_model(model)) {
        grid.axes.emplace_back("embedding_dim",
                               std::vector<double>{30, 40, 50, 60, 70, 80, 90, 100});
        grid.axes.emplace_back("lr", default_lr_grid());
        grid.axes.emplace_back("stemming", std::vector<double>{1, 0});
    } else {
        grid.axes.emplace_back("lambda", default_lambda_grid());
        grid.axes.emplace_back("n_max",
                               std::vector<double>{200, 300, 400, 500, 1000, -1});
        grid.axes.emplace_back("stemming", std::vector<double>{1, 0});
    }
    return grid;
}

ft::ParamGrid parse_grid(const std::vector<std::string>& specs) {
    ft::ParamGrid grid;
    for (const auto& s : specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::runtime_error("grid axis must look like name=v1,v2,... : '" + s + "'");
        }
        std::vector<double> vals;
        std::stringstream ss(s.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
        if (vals.empty()) throw std::runtime_error("empty grid axis '" + s + "'");
        grid.axes.emplace_back(s.substr(0, eq), std::move(vals));
    }
    return grid;
}

void apply_point(const ft::GridPoint& p, ModelOpts& mo, TextOpts& to) {
    for (const auto& [name, v] : p.values) {
        if (name == "lambda") mo.lambda = v;
        else if (name == "l1_ratio") mo.l1_ratio = v;
        else if (name == "lr") mo.lr = v;
        else if (name == "embedding_dim") mo.embedding_dim = static_cast<int>(v);
        else if (name == "epochs") mo.epochs = static_cast<int>(v);
        else if (name == "batch_size") mo.batch_size = static_cast<int>(v);
        else if (name == "n_max") to.n_max = static_cast<int64_t>(v);
        else if (name == "stemming") to.stemming = v != 0.0;
        else if (name == "ngram") to.ngram = static_cast<int>(v);
        else if (name == "max_len") to.max_len = static_cast<int>(v);
        else throw std::runtime_error("unknown tuning parameter '" + name + "'");
    }
}

bool single_class(const std::vector<double>& targets) {
    return std::adjacent_find(targets.begin(), targets.end(),
                              std::not_equal_to<>()) == targets.end();
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_gensynth(const json& cfg, uint64_t seed, const std::string& out_dir,
                 const ft::SyntheticSpec& spec) {
    echo_run("gensynth", cfg, seed);
    const auto corpus = ft::generate_synthetic(spec);
    ft::save_documents(corpus.docs, out_dir + "/docs.jsonl");
    ft::save_prices_csv(corpus.prices, out_dir + "/prices.csv");
    ft::save_market_csv(corpus.market, out_dir + "/market.csv");
    int positives = 0;
    for (int l : corpus.true_labels) positives += l;
    json meta{{"config_hash", config_hash(cfg)},
              {"seed", seed},
              {"n_docs", corpus.docs.size()},
              {"positives", positives}};
    std::ofstream meta_out(out_dir + "/meta.json");
    if (!meta_out) throw std::runtime_error("cannot write '" + out_dir + "/meta.json'");
    meta_out << meta.dump(2) << '\n';
    return 0;
}

int cmd_ingest(const json& cfg, uint64_t seed, const DataOpts& d, const std::string& out) {
    echo_run("ingest", cfg, seed);
    Dataset ds = load_dataset(d);
    ft::save_label_csv(ds.lc, out, artifact_header(cfg, seed));
    json summary{{"config_hash", config_hash(cfg)},
                 {"seed", seed},
                 {"labeled", ds.lc.docs.size()},
                 {"skipped_no_history", ds.lc.skipped},
                 {"dropped_no_prices", ds.stats.dropped_no_prices},
                 {"dropped_penny", ds.stats.dropped_penny},
                 {"dropped_non_trading", ds.stats.dropped_non_trading},
                 {"train", ds.n_train},
                 {"test", ds.lc.docs.size() - ds.n_train}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_tune(const json& cfg, uint64_t seed, const DataOpts& d, const TextOpts& to,
             const ModelOpts& mo, const std::string& method, int k, double fraction,
             const std::vector<std::string>& grid_specs, int jobs, const std::string& out) {
    echo_run("tune", cfg, seed);
    check_model_invariants(mo);
    Dataset ds = load_dataset(d);
    const bool classify = d.task == "classify";

    // Tuning sees only the chronological training share; the test block is
    // untouched, mirroring the final holdout evaluation.
    std::vector<int64_t> timestamps;
    for (size_t i = 0; i < ds.n_train; ++i) timestamps.push_back(ds.lc.docs.docs[i].timestamp);

    ft::FoldScorer scorer = [&](const ft::GridPoint& p, ft::IndexRange tr,
                                ft::IndexRange va) -> double {
        ModelOpts pm = mo;
        TextOpts pt = to;
        apply_point(p, pm, pt);
        const auto tr_tokens = slice(ds.tokens, tr.begin, tr.end);
        const auto tr_targets = slice(ds.targets, tr.begin, tr.end);
        const auto va_tokens = slice(ds.tokens, va.begin, va.end);
        const auto va_targets = slice(ds.targets, va.begin, va.end);
        const auto va_classes = slice(ds.classes, va.begin, va.end);
        if (classify && single_class(tr_targets)) return 0.5;
        if (is_seq_model(pm.model)) {
            const auto f = fit_seq(tr_tokens, tr_targets, d.task, pm, pt, seed);
            std::vector<size_t> kept;
            const auto scores = predict_seq_docs(f.model, f.vocab, va_tokens,
                                                 effective_max_len(pt), pt.stemming, kept);
            if (scores.empty()) return classify ? 0.5 : 1e18;
            if (classify) {
                std::vector<int> c;
                for (size_t i : kept) c.push_back(va_classes[i]);
                return ft::classification_metrics(scores, c).balanced_accuracy;
            }
            std::vector<double> t;
            for (size_t i : kept) t.push_back(va_targets[i]);
            return ft::regression_metrics(scores, t).mse;
        }
        const auto f = fit_linear(tr_tokens, tr_targets, pm, pt);
        const auto scores = predict_linear_docs(f, va_tokens);
        if (classify) return ft::classification_metrics(scores, va_classes).balanced_accuracy;
        return ft::regression_metrics(scores, va_targets).mse;
    };

    const ft::ParamGrid grid =
        grid_specs.empty() ? default_grid(mo.model) : parse_grid(grid_specs);
    const ft::TuneMetric metric =
        classify ? ft::TuneMetric::balanced_accuracy_max : ft::TuneMetric::mse_min;
    const ft::TuneOutcome outcome =
        method == "cv" ? ft::ts_cross_validate(timestamps, k, grid, scorer, metric, jobs)
                       : ft::holdout_tune(timestamps, fraction, grid, scorer, metric, jobs);
    if (!out.empty()) ft::save_tuning_csv(outcome, grid, out, artifact_header(cfg, seed));
    json best = json::object();
    for (const auto& [name, v] : outcome.best.values) best[name] = v;
    json result{{"config_hash", config_hash(cfg)}, {"seed", seed}, {"best", best}};
    std::cout << result.dump(2) << '\n';
    return 0;
}

int cmd_train(const json& cfg, uint64_t seed, const DataOpts& d, const TextOpts& to,
              const ModelOpts& mo, const std::string& out) {
    echo_run("train", cfg, seed);
    check_model_invariants(mo);
    Dataset ds = load_dataset(d);
    const auto tr_tokens = slice(ds.tokens, 0, ds.n_train);
    const auto tr_targets = slice(ds.targets, 0, ds.n_train);
    json summary{{"config_hash", config_hash(cfg)}, {"seed", seed}};
    if (is_seq_model(mo.model)) {
        const auto f = fit_seq(tr_tokens, tr_targets, d.task, mo, to, seed);
        ft::save_checkpoint(f.model, out);
        summary["epoch_losses"] = f.report.epoch_losses;
        summary["parameters"] = f.model.parameter_count();
    } else {
        const auto f = fit_linear(tr_tokens, tr_targets, mo, to);
        json model_json{{"format", "fintext-linear"},
                        {"config_hash", config_hash(cfg)},
                        {"seed", seed},
                        {"stemming", to.stemming},
                        {"ngram", to.ngram},
                        {"vocab", f.vocab.terms},
                        {"doc_freq", f.vocab.doc_freq},
                        {"model", json::parse(ft::linear_model_to_json(f.model))}};
        std::ofstream model_out(out);
        if (!model_out) throw std::runtime_error("cannot write '" + out + "'");
        model_out << model_json.dump(2) << '\n';
        summary["nonzero_weights"] =
            std::count_if(f.model.weights.begin(), f.model.weights.end(),
                          [](double w) { return w != 0.0; });
    }
    summary["model_file"] = out;
    std::cout << summary.dump(2) << '\n';
    return 0;
}

FittedLinear load_linear_file(const std::string& path, TextOpts& to) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    json j = json::parse(in);
    if (j.value("format", "") != "fintext-linear") {
        throw std::runtime_error("'" + path + "' is not a linear model file");
    }
    FittedLinear f;
    f.model = ft::linear_model_from_json(j.at("model").dump());
    f.vocab.terms = j.at("vocab").get<std::vector<std::string>>();
    f.vocab.doc_freq = j.at("doc_freq").get<std::vector<int64_t>>();
    f.vocab.corpus_freq.assign(f.vocab.terms.size(), 0);
    for (size_t i = 0; i < f.vocab.terms.size(); ++i) {
        f.vocab.index.emplace(f.vocab.terms[i], static_cast<int>(i));
    }
    to.stemming = j.at("stemming").get<bool>();
    to.ngram = j.at("ngram").get<int>();
    f.vocab.stemming = to.stemming;
    f.vocab.ngram = to.ngram;
    return f;
}

int cmd_evaluate(const json& cfg, uint64_t seed, const DataOpts& d, TextOpts to,
                 const ModelOpts& mo, const std::string& model_file, const std::string& out) {
    echo_run("evaluate", cfg, seed);
    check_model_invariants(mo);
    Dataset ds = load_dataset(d);
    const size_t n = ds.lc.docs.size();
    const auto tr_tokens = slice(ds.tokens, 0, ds.n_train);
    const auto tr_targets = slice(ds.targets, 0, ds.n_train);
    const auto tr_classes = slice(ds.classes, 0, ds.n_train);
    const auto te_tokens = slice(ds.tokens, ds.n_train, n);
    const auto te_targets = slice(ds.targets, ds.n_train, n);
    const auto te_classes = slice(ds.classes, ds.n_train, n);

    FittedLinear lin;
    FittedSeq seq;
    bool use_seq = is_seq_model(mo.model);
    if (!model_file.empty()) {
        if (use_seq) {
            seq.model = ft::load_checkpoint(model_file);
            seq.vocab.terms = seq.model.vocab_terms;
            seq.vocab.stemming = to.stemming;
            for (size_t i = 0; i < seq.vocab.terms.size(); ++i) {
                seq.vocab.index.emplace(seq.vocab.terms[i], static_cast<int>(i));
            }
        } else {
            lin = load_linear_file(model_file, to);
        }
    } else if (use_seq) {
        seq = fit_seq(tr_tokens, tr_targets, d.task, mo, to, seed);
    } else {
        lin = fit_linear(tr_tokens, tr_targets, mo, to);
    }

    const FittedLinear* lp = use_seq ? nullptr : &lin;
    const FittedSeq* sp = use_seq ? &seq : nullptr;
    json report{{"config_hash", config_hash(cfg)},
                {"seed", seed},
                {"train", evaluate_side(d, to, lp, sp, tr_tokens, tr_targets, tr_classes, true)},
                {"test", evaluate_side(d, to, lp, sp, te_tokens, te_targets, te_classes, false)}};
    const std::string text = report.dump(2) + "\n";
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write '" + out + "'");
        f << text;
    }
    std::cout << text;
    return 0;
}

int cmd_explain(const json& cfg, uint64_t seed, const std::string& model_file,
                const std::string& words_file, const std::string& dictionary, bool stemming,
                const std::string& out) {
    echo_run("explain", cfg, seed);
    const ft::SeqModel model = ft::load_checkpoint(model_file);
    ft::Vocabulary vocab;
    vocab.terms = model.vocab_terms;
    vocab.stemming = stemming;
    for (size_t i = 0; i < vocab.terms.size(); ++i) {
        vocab.index.emplace(vocab.terms[i], static_cast<int>(i));
    }
    std::vector<std::string> words;
    std::ifstream in(words_file);
    if (!in) throw std::runtime_error("cannot open word list '" + words_file + "'");
    std::string w;
    while (std::getline(in, w)) {
        if (!w.empty()) words.push_back(w);
    }
    if (words.empty()) throw std::runtime_error("word list '" + words_file + "' is empty");
    std::map<std::string, std::string> labels;
    if (!dictionary.empty()) labels = ft::load_dictionary_csv(dictionary);
    const auto table = ft::word_polarity(model, words, vocab, stemming, labels);
    ft::save_polarity_csv(table, out, artifact_header(cfg, seed));
    json summary{{"config_hash", config_hash(cfg)},
                 {"seed", seed},
                 {"words", words.size()},
                 {"degenerate", table.degenerate}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const json& cfg, uint64_t seed, const DataOpts& d, const TextOpts& to,
              const ModelOpts& mo, const std::vector<int>& first_k, const std::string& out) {
    echo_run("sweep", cfg, seed);
    check_model_invariants(mo);
    Dataset ds = load_dataset(d);
    const bool classify = d.task == "classify";
    ft::SweepData data;
    const size_t n = ds.lc.docs.size();
    for (size_t i = 0; i < n; ++i) {
        if (i < ds.n_train) {
            data.train_docs.push_back(ds.lc.docs.docs[i]);
            data.train_targets.push_back(ds.targets[i]);
        } else {
            data.test_docs.push_back(ds.lc.docs.docs[i]);
            data.test_targets.push_back(ds.targets[i]);
        }
    }
    std::vector<ft::TruncationMode> modes;
    modes.push_back({ft::TruncationMode::Kind::first_sentence, 0});
    for (int k : first_k) modes.push_back({ft::TruncationMode::Kind::first_k, k});
    modes.push_back({ft::TruncationMode::Kind::full, 0});

    ft::SweepModelFn fn = [&](const std::vector<ft::TokenSeq>& train,
                              const std::vector<double>& y_train,
                              const std::vector<ft::TokenSeq>& test,
                              const std::vector<double>& y_test) -> double {
        std::vector<int> test_classes(y_test.size());
        std::transform(y_test.begin(), y_test.end(), test_classes.begin(),
                       [](double t) { return t > 0.5 ? 1 : 0; });
        if (is_seq_model(mo.model)) {
            const auto f = fit_seq(train, y_train, d.task, mo, to, seed);
            std::vector<size_t> kept;
            const auto scores = predict_seq_docs(f.model, f.vocab, test, effective_max_len(to),
                                                 to.stemming, kept);
            if (scores.empty()) return classify ? 0.5 : 0.0;
            if (classify) {
                std::vector<int> c;
                for (size_t i : kept) c.push_back(test_classes[i]);
                return ft::classification_metrics(scores, c).balanced_accuracy;
            }
            std::vector<double> t;
            for (size_t i : kept) t.push_back(y_test[i]);
            return ft::regression_metrics(scores, t).rmse;
        }
        const auto f = fit_linear(train, y_train, mo, to);
        const auto scores = predict_linear_docs(f, test);
        if (classify) return ft::classification_metrics(scores, test_classes).balanced_accuracy;
        return ft::regression_metrics(scores, y_test).rmse;
    };
    const std::string metric_name = classify ? "balanced_accuracy" : "rmse";
    const auto rows = ft::truncation_sweep(data, fn, modes, metric_name);
    ft::save_sweep_csv(rows, out, artifact_header(cfg, seed));
    json summary{{"config_hash", config_hash(cfg)}, {"seed", seed}, {"rows", rows.size()}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_portfolio(const json& cfg, uint64_t seed, double p, int days, double r, double start) {
    echo_run("portfolio", cfg, seed);
    const auto e = ft::expected_portfolio(p, days, r, start);
    json out{{"config_hash", config_hash(cfg)},
             {"seed", seed},
             {"accuracy", p},
             {"days", days},
             {"per_event_log_return", r},
             {"start_value", start},
             {"expected_log_return", e.expected_log_return},
             {"expected_value", e.expected_value}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const json filecfg = load_config_file(argc, argv);

        CLI::App app{"disclosure-to-return prediction pipeline"};
        app.require_subcommand(1);
        app.fallthrough();  // global flags (--seed, --jobs, --config) may follow the subcommand
        std::string config_path;
        app.add_option("--config", config_path, "flat JSON config file; flags override")
            ->expected(1);

        uint64_t seed = 0;
        int jobs = 1;
        cfg_default(filecfg, "seed", seed);
        cfg_default(filecfg, "jobs", jobs);
        app.add_option("--seed", seed, "RNG seed recorded in every artifact");
        app.add_option("--jobs", jobs, "grid-search parallelism (1 = bit-deterministic)");

        // gensynth
        auto* gen = app.add_subcommand("gensynth", "write a planted-signal synthetic corpus");
        std::string gen_out = ".";
        ft::SyntheticSpec spec;
        std::string signal = "keyword";
        cfg_default(filecfg, "out", gen_out);
        cfg_default(filecfg, "n_docs", spec.n_docs);
        cfg_default(filecfg, "vocab_size", spec.vocab_size);
        cfg_default(filecfg, "signal", signal);
        cfg_default(filecfg, "strength", spec.signal_strength);
        cfg_default(filecfg, "min_len", spec.min_len);
        cfg_default(filecfg, "max_len", spec.max_len);
        cfg_default(filecfg, "signal_min_pos", spec.signal_min_pos);
        gen->add_option("--out", gen_out, "output directory");
        gen->add_option("--n-docs", spec.n_docs);
        gen->add_option("--vocab-size", spec.vocab_size);
        gen->add_option("--signal", signal)->check(CLI::IsMember({"keyword", "negation"}));
        gen->add_option("--strength", spec.signal_strength);
        gen->add_option("--min-len", spec.min_len);
        gen->add_option("--max-len", spec.max_len);
        gen->add_option("--signal-min-pos", spec.signal_min_pos);

        // ingest
        auto* ing = app.add_subcommand("ingest", "load, filter, label and split a corpus");
        DataOpts ing_data;
        std::string ing_out = "labels.csv";
        add_data_options(ing, ing_data, filecfg);
        cfg_default(filecfg, "out", ing_out);
        ing->add_option("--out", ing_out, "label CSV path");

        // tune
        auto* tun = app.add_subcommand("tune", "grid search with time-series cross-validation");
        DataOpts tun_data;
        TextOpts tun_text;
        ModelOpts tun_model;
        std::string method = "cv";
        int cv_k = 5;
        double holdout_fraction = 0.2;
        std::vector<std::string> grid_specs;
        std::string tun_out;
        add_data_options(tun, tun_data, filecfg);
        add_text_options(tun, tun_text, filecfg);
        add_model_options(tun, tun_model, filecfg);
        cfg_default(filecfg, "method", method);
        cfg_default(filecfg, "k", cv_k);
        cfg_default(filecfg, "fraction", holdout_fraction);
        cfg_default(filecfg, "out", tun_out);
        tun->add_option("--method", method)->check(CLI::IsMember({"cv", "holdout"}));
        tun->add_option("--k", cv_k, "number of chronological subsets");
        tun->add_option("--fraction", holdout_fraction, "holdout validation share");
        tun->add_option("--grid", grid_specs, "axis as name=v1,v2,... (repeatable)");
        tun->add_option("--out", tun_out, "tuning CSV path");

        // train
        auto* tra = app.add_subcommand("train", "fit a model on the training split");
        DataOpts tra_data;
        TextOpts tra_text;
        ModelOpts tra_model;
        std::string tra_out = "model.bin";
        add_data_options(tra, tra_data, filecfg);
        add_text_options(tra, tra_text, filecfg);
        add_model_options(tra, tra_model, filecfg);
        cfg_default(filecfg, "out", tra_out);
        tra->add_option("--out", tra_out, "model/checkpoint output path");

        // evaluate
        auto* eva = app.add_subcommand("evaluate", "train/test metric report");
        DataOpts eva_data;
        TextOpts eva_text;
        ModelOpts eva_model;
        std::string eva_model_file, eva_out;
        add_data_options(eva, eva_data, filecfg);
        add_text_options(eva, eva_text, filecfg);
        add_model_options(eva, eva_model, filecfg);
        cfg_default(filecfg, "model_file", eva_model_file);
        cfg_default(filecfg, "out", eva_out);
        eva->add_option("--model-file", eva_model_file, "evaluate a saved model instead");
        eva->add_option("--out", eva_out, "metric JSON path (also printed)");

        // explain
        auto* exp = app.add_subcommand("explain", "single-word polarity scores");
        std::string exp_model, exp_words, exp_dict, exp_out = "polarity.csv";
        bool exp_stemming = false;
        cfg_default(filecfg, "model_file", exp_model);
        cfg_default(filecfg, "words", exp_words);
        cfg_default(filecfg, "dictionary", exp_dict);
        cfg_default(filecfg, "stemming", exp_stemming);
        cfg_default(filecfg, "out", exp_out);
        exp->add_option("--model-file", exp_model, "sequence model checkpoint")->required();
        exp->add_option("--words", exp_words, "word list, one per line")->required();
        exp->add_option("--dictionary", exp_dict, "optional entry,label CSV");
        exp->add_flag("--stemming,!--no-stemming", exp_stemming);
        exp->add_option("--out", exp_out, "polarity CSV path");

        // sweep
        auto* swp = app.add_subcommand("sweep", "document truncation sweep");
        DataOpts swp_data;
        TextOpts swp_text;
        ModelOpts swp_model;
        std::vector<int> first_k{50, 100};
        std::string swp_out = "sweep.csv";
        add_data_options(swp, swp_data, filecfg);
        add_text_options(swp, swp_text, filecfg);
        add_model_options(swp, swp_model, filecfg);
        cfg_default(filecfg, "first_k", first_k);
        cfg_default(filecfg, "out", swp_out);
        swp->add_option("--first-k", first_k, "first-k token modes (repeatable)");
        swp->add_option("--out", swp_out, "sweep CSV path");

        // portfolio
        auto* pf = app.add_subcommand("portfolio", "expected portfolio calculator");
        double pf_p = 0.5, pf_r = 0.05, pf_start = 1000.0;
        int pf_days = 200;
        cfg_default(filecfg, "p", pf_p);
        cfg_default(filecfg, "days", pf_days);
        cfg_default(filecfg, "r", pf_r);
        cfg_default(filecfg, "start", pf_start);
        pf->add_option("--p", pf_p, "directional accuracy");
        pf->add_option("--days", pf_days, "trading days");
        pf->add_option("--r", pf_r, "per-event log return");
        pf->add_option("--start", pf_start, "starting value");

        CLI11_PARSE(app, argc, argv);

        if (gen->parsed()) {
            spec.signal_kind =
                signal == "negation" ? ft::SignalKind::negation : ft::SignalKind::keyword;
            spec.seed = seed;
            json cfg{{"out", gen_out},
                     {"n_docs", spec.n_docs},
                     {"vocab_size", spec.vocab_size},
                     {"signal", signal},
                     {"strength", spec.signal_strength},
                     {"min_len", spec.min_len},
                     {"max_len", spec.max_len},
                     {"signal_min_pos", spec.signal_min_pos},
                     {"seed", seed}};
            return cmd_gensynth(cfg, seed, gen_out, spec);
        }
        if (ing->parsed()) {
            json cfg = data_config(ing_data);
            cfg["out"] = ing_out;
            cfg["seed"] = seed;
            return cmd_ingest(cfg, seed, ing_data, ing_out);
        }
        if (tun->parsed()) {
            json cfg = data_config(tun_data);
            cfg.update(text_config(tun_text));
            cfg.update(model_config(tun_model));
            cfg["method"] = method;
            cfg["k"] = cv_k;
            cfg["fraction"] = holdout_fraction;
            cfg["grid"] = grid_specs;
            cfg["jobs"] = jobs;
            cfg["seed"] = seed;
            return cmd_tune(cfg, seed, tun_data, tun_text, tun_model, method, cv_k,
                            holdout_fraction, grid_specs, jobs, tun_out);
        }
        if (tra->parsed()) {
            json cfg = data_config(tra_data);
            cfg.update(text_config(tra_text));
            cfg.update(model_config(tra_model));
            cfg["out"] = tra_out;
            cfg["seed"] = seed;
            return cmd_train(cfg, seed, tra_data, tra_text, tra_model, tra_out);
        }
        if (eva->parsed()) {
            json cfg = data_config(eva_data);
            cfg.update(text_config(eva_text));
            cfg.update(model_config(eva_model));
            cfg["model_file"] = eva_model_file;
            cfg["seed"] = seed;
            return cmd_evaluate(cfg, seed, eva_data, eva_text, eva_model, eva_model_file,
                                eva_out);
        }
        if (exp->parsed()) {
            json cfg{{"model_file", exp_model}, {"words", exp_words},
                     {"dictionary", exp_dict},  {"stemming", exp_stemming},
                     {"out", exp_out},          {"seed", seed}};
            return cmd_explain(cfg, seed, exp_model, exp_words, exp_dict, exp_stemming, exp_out);
        }
        if (swp->parsed()) {
            json cfg = data_config(swp_data);
            cfg.update(text_config(swp_text));
            cfg.update(model_config(swp_model));
            cfg["first_k"] = first_k;
            cfg["out"] = swp_out;
            cfg["seed"] = seed;
            return cmd_sweep(cfg, seed, swp_data, swp_text, swp_model, first_k, swp_out);
        }
        if (pf->parsed()) {
            json cfg{{"p", pf_p},          {"days", pf_days}, {"r", pf_r},
                     {"start", pf_start},  {"seed", seed}};
            return cmd_portfolio(cfg, seed, pf_p, pf_days, pf_r, pf_start);
        }
        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
