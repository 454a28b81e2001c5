#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fintext/tensor.hpp"
#include "fintext/textproc.hpp"

namespace fintext {

enum class CellKind { rnn, lstm };
enum class TaskKind { classification, regression };
enum class LossKind { bce, mse };

struct SeqModelConfig {
    CellKind cell = CellKind::lstm;
    TaskKind task = TaskKind::classification;
    // Default output is h = o . c as printed in the source architecture;
    // enabling this uses the conventional h = o . tanh(c).
    bool tanh_output = false;
    int embedding_dim = 30;
};

// Embedding + one recurrent cell + feedforward head. Hidden size equals the
// embedding size. Every tensor has a unique name in the registry, which
// drives checkpoints and transfer.
struct SeqModel {
    SeqModelConfig config;
    std::vector<std::string> vocab_terms;

    Tensor embedding;  // |V| x n

    // rnn cell
    Tensor rnn_w, rnn_u, rnn_b;
    // lstm gates: forget, update, output, candidate
    Tensor wf, uf, bf, wu, uu, bu, wo, uo, bo, wc, uc, bc;

    Tensor head_w;  // n
    Tensor head_b;  // 1

    std::vector<std::pair<std::string, Tensor*>> named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;

    // Same architecture, all tensors zero. Used as a gradient accumulator.
    SeqModel zeros_like() const;

    int64_t parameter_count() const;
    int vocab_size() const { return static_cast<int>(vocab_terms.size()); }
};

// Xavier for cell/head weights, zero biases, U(-0.1,0.1) embeddings.
SeqModel init_seq_model(const SeqModelConfig& config, std::vector<std::string> vocab_terms,
                        Rng& rng);

// Single cell steps, exposed for oracle tests.
void rnn_step(const SeqModel& m, const std::vector<double>& s_prev, const std::vector<double>& x,
              std::vector<double>& s_out);
void lstm_step(const SeqModel& m, const std::vector<double>& h_prev,
               const std::vector<double>& c_prev, const std::vector<double>& x,
               std::vector<double>& h_out, std::vector<double>& c_out);

// Full forward over a token-index sequence. Classification passes the head
// through a sigmoid; regression returns the raw score.
double seq_forward(const SeqModel& m, const std::vector<int>& seq);

// Loss of one instance; used by training and by the finite-difference check.
double seq_loss(const SeqModel& m, const std::vector<int>& seq, double target, LossKind loss);

// Accumulates full-BPTT gradients for one instance into `grads`
// (a zeros_like clone); returns the instance loss.
double seq_backward(const SeqModel& m, const std::vector<int>& seq, double target, LossKind loss,
                    SeqModel& grads);

struct LabeledSequence {
    std::vector<int> tokens;
    double target = 0.0;  // {0,1} class or a return
};

struct TrainOptions {
    LossKind loss = LossKind::bce;
    int epochs = 10;
    int batch_size = 8;
    double learning_rate = 0.001;
    uint64_t seed = 0;
};

struct TrainReport {
    std::vector<double> epoch_losses;  // mean instance loss per epoch
};

// Mini-batch Adam over shuffled instances; deterministic given the seed.
TrainReport train(SeqModel& model, const std::vector<LabeledSequence>& data,
                  const TrainOptions& opts);

// Checkpoint: "NNCK" magic, u32 LE version, u64 LE manifest length, JSON
// manifest, then concatenated row-major little-endian f64 payloads.
void save_checkpoint(const SeqModel& m, const std::string& path);
SeqModel load_checkpoint(const std::string& path);

// Word-vector text file `word v1 .. vn`; vocabulary words missing from the
// file are drawn from U(-0.1, 0.1). Duplicate words: last occurrence wins.
Tensor load_pretrained_embeddings(const std::string& path, const Vocabulary& vocab, int dim,
                                  Rng& rng);

struct TransferReport {
    int shared_words = 0;
    int new_words = 0;
};

// Copies cell and head tensors verbatim from the source checkpoint; embedding
// rows for shared vocabulary words are copied, the rest drawn fresh.
SeqModel transfer_init(const std::vector<std::string>& target_vocab, const std::string& source_ckpt,
                       Rng& rng, TransferReport* report = nullptr);

}  // namespace fintext
