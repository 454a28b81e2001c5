#include "fintext/seqnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace fintext {

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

// out += M * x, M row-major (n x n)
void gemv_add(const Tensor& m, const std::vector<double>& x, std::vector<double>& out) {
    const int n = m.rows();
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        const double* row = m.data.data() + static_cast<size_t>(r) * n;
        for (int c = 0; c < n; ++c) s += row[c] * x[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] += s;
    }
}

// out += M^T * x
void gemv_t_add(const Tensor& m, const std::vector<double>& x, std::vector<double>& out) {
    const int n = m.rows();
    for (int r = 0; r < n; ++r) {
        const double xr = x[static_cast<size_t>(r)];
        if (xr == 0.0) continue;
        const double* row = m.data.data() + static_cast<size_t>(r) * n;
        for (int c = 0; c < n; ++c) out[static_cast<size_t>(c)] += row[c] * xr;
    }
}

// G += a * b^T
void outer_add(Tensor& g, const std::vector<double>& a, const std::vector<double>& b) {
    const int n = g.rows();
    for (int r = 0; r < n; ++r) {
        double* row = g.data.data() + static_cast<size_t>(r) * n;
        const double ar = a[static_cast<size_t>(r)];
        for (int c = 0; c < n; ++c) row[c] += ar * b[static_cast<size_t>(c)];
    }
}

void vec_add(std::vector<double>& out, const Tensor& b) {
    for (size_t i = 0; i < out.size(); ++i) out[i] += b.data[i];
}

}  // namespace

std::vector<std::pair<std::string, Tensor*>> SeqModel::named_tensors() {
    std::vector<std::pair<std::string, Tensor*>> v;
    v.emplace_back("embedding", &embedding);
    if (config.cell == CellKind::rnn) {
        v.emplace_back("rnn.W", &rnn_w);
        v.emplace_back("rnn.U", &rnn_u);
        v.emplace_back("rnn.b", &rnn_b);
    } else {
        v.emplace_back("lstm.Wf", &wf);
        v.emplace_back("lstm.Uf", &uf);
        v.emplace_back("lstm.bf", &bf);
        v.emplace_back("lstm.Wu", &wu);
        v.emplace_back("lstm.Uu", &uu);
        v.emplace_back("lstm.bu", &bu);
        v.emplace_back("lstm.Wo", &wo);
        v.emplace_back("lstm.Uo", &uo);
        v.emplace_back("lstm.bo", &bo);
        v.emplace_back("lstm.Wc", &wc);
        v.emplace_back("lstm.Uc", &uc);
        v.emplace_back("lstm.bc", &bc);
    }
    v.emplace_back("head.w", &head_w);
    v.emplace_back("head.b", &head_b);
    return v;
}

std::vector<std::pair<std::string, const Tensor*>> SeqModel::named_tensors() const {
    std::vector<std::pair<std::string, const Tensor*>> v;
    for (auto& [name, t] : const_cast<SeqModel*>(this)->named_tensors()) v.emplace_back(name, t);
    return v;
}

SeqModel SeqModel::zeros_like() const {
    SeqModel g;
    g.config = config;
    g.vocab_terms = vocab_terms;
    g.embedding = Tensor(embedding.shape);
    if (config.cell == CellKind::rnn) {
        g.rnn_w = Tensor(rnn_w.shape);
        g.rnn_u = Tensor(rnn_u.shape);
        g.rnn_b = Tensor(rnn_b.shape);
    } else {
        g.wf = Tensor(wf.shape);
        g.uf = Tensor(uf.shape);
        g.bf = Tensor(bf.shape);
        g.wu = Tensor(wu.shape);
        g.uu = Tensor(uu.shape);
        g.bu = Tensor(bu.shape);
        g.wo = Tensor(wo.shape);
        g.uo = Tensor(uo.shape);
        g.bo = Tensor(bo.shape);
        g.wc = Tensor(wc.shape);
        g.uc = Tensor(uc.shape);
        g.bc = Tensor(bc.shape);
    }
    g.head_w = Tensor(head_w.shape);
    g.head_b = Tensor(head_b.shape);
    return g;
}

int64_t SeqModel::parameter_count() const {
    int64_t n = 0;
    for (auto& [name, t] : named_tensors()) n += static_cast<int64_t>(t->size());
    return n;
}

SeqModel init_seq_model(const SeqModelConfig& config, std::vector<std::string> vocab_terms,
                        Rng& rng) {
    if (config.embedding_dim < 1) throw std::invalid_argument("embedding_dim must be >= 1");
    if (vocab_terms.empty()) throw std::invalid_argument("empty vocabulary");
    const int n = config.embedding_dim;
    const int v = static_cast<int>(vocab_terms.size());
    SeqModel m;
    m.config = config;
    m.vocab_terms = std::move(vocab_terms);
    m.embedding = uniform_init({v, n}, -0.1, 0.1, rng);
    if (config.cell == CellKind::rnn) {
        m.rnn_w = xavier_init({n, n}, rng);
        m.rnn_u = xavier_init({n, n}, rng);
        m.rnn_b = Tensor({n});
    } else {
        for (Tensor* w : {&m.wf, &m.wu, &m.wo, &m.wc}) *w = xavier_init({n, n}, rng);
        for (Tensor* u : {&m.uf, &m.uu, &m.uo, &m.uc}) *u = xavier_init({n, n}, rng);
        for (Tensor* b : {&m.bf, &m.bu, &m.bo, &m.bc}) *b = Tensor({n});
    }
    m.head_w = xavier_init({n, 1}, rng);
    m.head_w.shape = {n};
    m.head_b = Tensor({1});
    return m;
}

void rnn_step(const SeqModel& m, const std::vector<double>& s_prev, const std::vector<double>& x,
              std::vector<double>& s_out) {
    const int n = m.config.embedding_dim;
    if (static_cast<int>(s_prev.size()) != n || static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("rnn_step: shape mismatch");
    }
    s_out.assign(static_cast<size_t>(n), 0.0);
    gemv_add(m.rnn_w, x, s_out);
    gemv_add(m.rnn_u, s_prev, s_out);
    vec_add(s_out, m.rnn_b);
    for (auto& v : s_out) v = std::tanh(v);
}

namespace {

struct LstmGates {
    std::vector<double> f, u, o, g;  // gate activations
};

void lstm_gates(const SeqModel& m, const std::vector<double>& h_prev,
                const std::vector<double>& x, LstmGates& gates) {
    const int n = m.config.embedding_dim;
    auto affine = [&](const Tensor& w, const Tensor& u, const Tensor& b, std::vector<double>& out) {
        out.assign(static_cast<size_t>(n), 0.0);
        gemv_add(w, x, out);
        gemv_add(u, h_prev, out);
        vec_add(out, b);
    };
    affine(m.wf, m.uf, m.bf, gates.f);
    affine(m.wu, m.uu, m.bu, gates.u);
    affine(m.wo, m.uo, m.bo, gates.o);
    affine(m.wc, m.uc, m.bc, gates.g);
    for (auto& v : gates.f) v = sigmoid(v);
    for (auto& v : gates.u) v = sigmoid(v);
    for (auto& v : gates.o) v = sigmoid(v);
    for (auto& v : gates.g) v = std::tanh(v);
}

}  // namespace

void lstm_step(const SeqModel& m, const std::vector<double>& h_prev,
               const std::vector<double>& c_prev, const std::vector<double>& x,
               std::vector<double>& h_out, std::vector<double>& c_out) {
    const int n = m.config.embedding_dim;
    if (static_cast<int>(h_prev.size()) != n || static_cast<int>(c_prev.size()) != n ||
        static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("lstm_step: shape mismatch");
    }
    LstmGates gates;
    lstm_gates(m, h_prev, x, gates);
    c_out.resize(static_cast<size_t>(n));
    h_out.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        c_out[k] = gates.f[k] * c_prev[k] + gates.u[k] * gates.g[k];
        h_out[k] = m.config.tanh_output ? gates.o[k] * std::tanh(c_out[k]) : gates.o[k] * c_out[k];
    }
}

namespace {

struct ForwardCache {
    std::vector<std::vector<double>> x;  // embedded inputs
    std::vector<std::vector<double>> h;  // per-step output (rnn state)
    std::vector<std::vector<double>> c;  // lstm cell states
    std::vector<LstmGates> gates;        // lstm only
    double raw = 0.0;                    // head score before any sigmoid
};

void run_forward(const SeqModel& m, const std::vector<int>& seq, ForwardCache& cache) {
    if (seq.empty()) throw std::invalid_argument("empty sequence");
    const int n = m.config.embedding_dim;
    const size_t T = seq.size();
    cache.x.resize(T);
    cache.h.resize(T);
    if (m.config.cell == CellKind::lstm) {
        cache.c.resize(T);
        cache.gates.resize(T);
    }
    std::vector<double> h_prev(static_cast<size_t>(n), 0.0);
    std::vector<double> c_prev(static_cast<size_t>(n), 0.0);
    for (size_t t = 0; t < T; ++t) {
        const int idx = seq[t];
        if (idx < 0 || idx >= m.embedding.rows()) {
            throw std::out_of_range("token index out of vocabulary range");
        }
        auto& x = cache.x[t];
        x.assign(m.embedding.data.begin() + static_cast<size_t>(idx) * n,
                 m.embedding.data.begin() + static_cast<size_t>(idx + 1) * n);
        if (m.config.cell == CellKind::rnn) {
            rnn_step(m, h_prev, x, cache.h[t]);
            h_prev = cache.h[t];
        } else {
            lstm_gates(m, h_prev, x, cache.gates[t]);
            auto& c = cache.c[t];
            auto& h = cache.h[t];
            c.resize(static_cast<size_t>(n));
            h.resize(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                const auto& g = cache.gates[t];
                c[k] = g.f[k] * c_prev[k] + g.u[k] * g.g[k];
                h[k] = m.config.tanh_output ? g.o[k] * std::tanh(c[k]) : g.o[k] * c[k];
            }
            h_prev = h;
            c_prev = c;
        }
    }
    double p = m.head_b.data[0];
    for (int i = 0; i < n; ++i) p += m.head_w.data[static_cast<size_t>(i)] * h_prev[static_cast<size_t>(i)];
    cache.raw = p;
}

double loss_value(double raw, double target, LossKind loss) {
    if (loss == LossKind::mse) {
        const double d = raw - target;
        return d * d;
    }
    const double yhat = sigmoid(raw);
    const double eps = 1e-12;
    return -(target * std::log(yhat + eps) + (1.0 - target) * std::log(1.0 - yhat + eps));
}

}  // namespace

double seq_forward(const SeqModel& m, const std::vector<int>& seq) {
    ForwardCache cache;
    run_forward(m, seq, cache);
    return m.config.task == TaskKind::classification ? sigmoid(cache.raw) : cache.raw;
}

double seq_loss(const SeqModel& m, const std::vector<int>& seq, double target, LossKind loss) {
    ForwardCache cache;
    run_forward(m, seq, cache);
    return loss_value(cache.raw, target, loss);
}

double seq_backward(const SeqModel& m, const std::vector<int>& seq, double target, LossKind loss,
                    SeqModel& grads) {
    ForwardCache cache;
    run_forward(m, seq, cache);
    const int n = m.config.embedding_dim;
    const size_t T = seq.size();

    double dp;  // dLoss / dRaw
    if (loss == LossKind::mse) {
        dp = 2.0 * (cache.raw - target);
    } else {
        dp = sigmoid(cache.raw) - target;
    }

    const auto& h_last = cache.h[T - 1];
    std::vector<double> dh(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        grads.head_w.data[k] += dp * h_last[k];
        dh[k] = dp * m.head_w.data[k];
    }
    grads.head_b.data[0] += dp;

    if (m.config.cell == CellKind::rnn) {
        for (size_t t = T; t-- > 0;) {
            const auto& s = cache.h[t];
            std::vector<double> da(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                da[k] = dh[k] * (1.0 - s[k] * s[k]);
            }
            const std::vector<double> zero(static_cast<size_t>(n), 0.0);
            const auto& s_prev = t > 0 ? cache.h[t - 1] : zero;
            outer_add(grads.rnn_w, da, cache.x[t]);
            outer_add(grads.rnn_u, da, s_prev);
            for (int i = 0; i < n; ++i) grads.rnn_b.data[static_cast<size_t>(i)] += da[static_cast<size_t>(i)];
            std::vector<double> dx(static_cast<size_t>(n), 0.0);
            gemv_t_add(m.rnn_w, da, dx);
            const int idx = seq[t];
            for (int i = 0; i < n; ++i) {
                grads.embedding.data[static_cast<size_t>(idx) * n + i] += dx[static_cast<size_t>(i)];
            }
            std::fill(dh.begin(), dh.end(), 0.0);
            gemv_t_add(m.rnn_u, da, dh);
        }
    } else {
        std::vector<double> dc(static_cast<size_t>(n), 0.0);
        for (size_t t = T; t-- > 0;) {
            const auto& g = cache.gates[t];
            const auto& c = cache.c[t];
            const std::vector<double> zero(static_cast<size_t>(n), 0.0);
            const auto& c_prev = t > 0 ? cache.c[t - 1] : zero;
            const auto& h_prev = t > 0 ? cache.h[t - 1] : zero;

            std::vector<double> d_o(static_cast<size_t>(n)), d_f(static_cast<size_t>(n)),
                d_u(static_cast<size_t>(n)), d_g(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                double dck;
                if (m.config.tanh_output) {
                    const double tc = std::tanh(c[k]);
                    d_o[k] = dh[k] * tc;
                    dck = dc[k] + dh[k] * g.o[k] * (1.0 - tc * tc);
                } else {
                    d_o[k] = dh[k] * c[k];
                    dck = dc[k] + dh[k] * g.o[k];
                }
                d_f[k] = dck * c_prev[k];
                d_u[k] = dck * g.g[k];
                d_g[k] = dck * g.u[k];
                dc[k] = dck * g.f[k];  // flows to step t-1
            }
            // activation derivatives
            for (int i = 0; i < n; ++i) {
                const size_t k = static_cast<size_t>(i);
                d_f[k] *= g.f[k] * (1.0 - g.f[k]);
                d_u[k] *= g.u[k] * (1.0 - g.u[k]);
                d_o[k] *= g.o[k] * (1.0 - g.o[k]);
                d_g[k] *= 1.0 - g.g[k] * g.g[k];
            }

            std::vector<double> dx(static_cast<size_t>(n), 0.0);
            std::vector<double> dh_prev(static_cast<size_t>(n), 0.0);
            auto accumulate_gate = [&](const std::vector<double>& da, Tensor& gw, Tensor& gu,
                                       Tensor& gb, const Tensor& w, const Tensor& u) {
                outer_add(gw, da, cache.x[t]);
                outer_add(gu, da, h_prev);
                for (int i = 0; i < n; ++i) gb.data[static_cast<size_t>(i)] += da[static_cast<size_t>(i)];
                gemv_t_add(w, da, dx);
                gemv_t_add(u, da, dh_prev);
            };
            accumulate_gate(d_f, grads.wf, grads.uf, grads.bf, m.wf, m.uf);
            accumulate_gate(d_u, grads.wu, grads.uu, grads.bu, m.wu, m.uu);
            accumulate_gate(d_o, grads.wo, grads.uo, grads.bo, m.wo, m.uo);
            accumulate_gate(d_g, grads.wc, grads.uc, grads.bc, m.wc, m.uc);

            const int idx = seq[t];
            for (int i = 0; i < n; ++i) {
                grads.embedding.data[static_cast<size_t>(idx) * n + i] += dx[static_cast<size_t>(i)];
            }
            dh = dh_prev;
        }
    }
    return loss_value(cache.raw, target, loss);
}

TrainReport train(SeqModel& model, const std::vector<LabeledSequence>& data,
                  const TrainOptions& opts) {
    if (data.empty()) throw std::invalid_argument("train: no data");
    if (opts.batch_size < 1 || opts.epochs < 0) throw std::invalid_argument("train: bad options");
    Rng rng(opts.seed);
    AdamState adam;
    adam.learning_rate = opts.learning_rate;

    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<Tensor*> params;
    for (auto& [name, t] : model.named_tensors()) params.push_back(t);

    TrainReport report;
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        size_t pos = 0;
        int batch_no = 0;
        while (pos < order.size()) {
            const size_t end = std::min(order.size(), pos + static_cast<size_t>(opts.batch_size));
            SeqModel grads = model.zeros_like();
            double batch_loss = 0.0;
            for (size_t i = pos; i < end; ++i) {
                const auto& inst = data[order[i]];
                batch_loss += seq_backward(model, inst.tokens, inst.target, opts.loss, grads);
            }
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("non-finite loss in batch " + std::to_string(batch_no) +
                                         " of epoch " + std::to_string(epoch));
            }
            const double scale = 1.0 / static_cast<double>(end - pos);
            std::vector<const Tensor*> grad_ptrs;
            for (auto& [name, t] : grads.named_tensors()) {
                for (auto& v : t->data) v *= scale;
                grad_ptrs.push_back(t);
            }
            adam_step(adam, params, grad_ptrs);
            epoch_loss += batch_loss;
            pos = end;
            ++batch_no;
        }
        report.epoch_losses.push_back(epoch_loss / static_cast<double>(data.size()));
    }
    return report;
}

// --- checkpoints ---------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'N', 'N', 'C', 'K'};
constexpr uint32_t kVersion = 1;

const char* cell_name(CellKind c) {
    return c == CellKind::rnn ? "rnn" : "lstm";
}
const char* task_name(TaskKind t) {
    return t == TaskKind::classification ? "classification" : "regression";
}

}  // namespace

void save_checkpoint(const SeqModel& m, const std::string& path) {
    nlohmann::json manifest = nlohmann::json::array();
    nlohmann::json meta{{"name", "__meta__"},
                        {"dtype", "meta"},
                        {"shape", nlohmann::json::array()},
                        {"byte_offset", 0},
                        {"cell", cell_name(m.config.cell)},
                        {"task", task_name(m.config.task)},
                        {"tanh_output", m.config.tanh_output},
                        {"embedding_dim", m.config.embedding_dim},
                        {"vocab", m.vocab_terms}};
    manifest.push_back(meta);
    uint64_t offset = 0;
    for (auto& [name, t] : m.named_tensors()) {
        manifest.push_back({{"name", name},
                            {"dtype", "f64"},
                            {"shape", t->shape},
                            {"byte_offset", offset}});
        offset += t->size() * sizeof(double);
    }
    const std::string mjson = manifest.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
    out.write(kMagic, 4);
    const uint32_t version = kVersion;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const uint64_t mlen = mjson.size();
    out.write(reinterpret_cast<const char*>(&mlen), 8);
    out.write(mjson.data(), static_cast<std::streamsize>(mjson.size()));
    for (auto& [name, t] : m.named_tensors()) {
        out.write(reinterpret_cast<const char*>(t->data.data()),
                  static_cast<std::streamsize>(t->size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write failure on checkpoint '" + path + "'");
}

SeqModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
    char magic[4];
    uint32_t version = 0;
    uint64_t mlen = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&mlen), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("bad checkpoint magic in '" + path + "'");
    }
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version in '" + path + "'");
    }
    std::string mjson(mlen, '\0');
    in.read(mjson.data(), static_cast<std::streamsize>(mlen));
    if (!in) throw std::runtime_error("corrupt checkpoint (truncated manifest) in '" + path + "'");
    nlohmann::json manifest = nlohmann::json::parse(mjson, nullptr, false);
    if (manifest.is_discarded() || !manifest.is_array()) {
        throw std::runtime_error("corrupt checkpoint manifest in '" + path + "'");
    }

    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    SeqModel m;
    bool meta_seen = false;
    for (const auto& entry : manifest) {
        if (entry.at("name") == "__meta__") {
            m.config.cell = entry.at("cell") == "rnn" ? CellKind::rnn : CellKind::lstm;
            m.config.task = entry.at("task") == "regression" ? TaskKind::regression
                                                             : TaskKind::classification;
            m.config.tanh_output = entry.at("tanh_output").get<bool>();
            m.config.embedding_dim = entry.at("embedding_dim").get<int>();
            m.vocab_terms = entry.at("vocab").get<std::vector<std::string>>();
            meta_seen = true;
        }
    }
    if (!meta_seen) throw std::runtime_error("corrupt checkpoint: missing metadata in '" + path + "'");

    // Allocate the architecture, then fill tensors by name.
    {
        Rng rng(0);
        SeqModel shape_donor = init_seq_model(m.config, m.vocab_terms, rng);
        m = std::move(shape_donor);
        for (auto& [name, t] : m.named_tensors()) t->fill(0.0);
    }

    std::unordered_map<std::string, Tensor*> by_name;
    for (auto& [name, t] : m.named_tensors()) by_name.emplace(name, t);
    std::unordered_map<std::string, bool> filled;

    for (const auto& entry : manifest) {
        const std::string name = entry.at("name").get<std::string>();
        if (name == "__meta__") continue;
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            std::cerr << "warning: ignoring unknown checkpoint tensor '" << name << "'\n";
            continue;
        }
        Tensor* t = it->second;
        const auto shape = entry.at("shape").get<std::vector<int>>();
        if (shape != t->shape) {
            throw std::runtime_error("corrupt checkpoint: shape mismatch for tensor '" + name +
                                     "' in '" + path + "'");
        }
        const uint64_t off = entry.at("byte_offset").get<uint64_t>();
        const uint64_t bytes = t->size() * sizeof(double);
        if (off + bytes > payload.size()) {
            throw std::runtime_error("corrupt checkpoint: truncated payload for tensor '" + name +
                                     "' in '" + path + "'");
        }
        std::memcpy(t->data.data(), payload.data() + off, bytes);
        filled[name] = true;
    }
    for (auto& [name, t] : m.named_tensors()) {
        if (!filled.count(name)) {
            throw std::runtime_error("corrupt checkpoint: missing tensor '" + name + "' in '" +
                                     path + "'");
        }
    }
    return m;
}

Tensor load_pretrained_embeddings(const std::string& path, const Vocabulary& vocab, int dim,
                                  Rng& rng) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding file '" + path + "'");
    Tensor e = uniform_init({vocab.size(), dim}, -0.1, 0.1, rng);
    std::string line;
    size_t lineno = 0;
    size_t duplicates = 0;
    std::unordered_map<std::string, bool> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vec;
        double v;
        while (ss >> v) vec.push_back(v);
        if (static_cast<int>(vec.size()) != dim) {
            throw std::runtime_error("embedding format error at line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(dim) + " values, got " +
                                     std::to_string(vec.size()));
        }
        if (seen.count(word)) ++duplicates;
        seen[word] = true;
        const int idx = vocab.lookup(word);
        if (idx < 0) continue;
        std::copy(vec.begin(), vec.end(), e.data.begin() + static_cast<size_t>(idx) * dim);
    }
    if (duplicates > 0) {
        std::cerr << "warning: " << duplicates
                  << " duplicate word(s) in embedding file; last occurrence wins\n";
    }
    return e;
}

SeqModel transfer_init(const std::vector<std::string>& target_vocab, const std::string& source_ckpt,
                       Rng& rng, TransferReport* report) {
    SeqModel src = load_checkpoint(source_ckpt);
    SeqModel m = init_seq_model(src.config, target_vocab, rng);

    // Cell and head tensors copied verbatim.
    auto src_named = src.named_tensors();
    auto dst_named = m.named_tensors();
    for (size_t i = 0; i < src_named.size(); ++i) {
        if (src_named[i].first == "embedding") continue;
        if (src_named[i].second->shape != dst_named[i].second->shape) {
            throw std::runtime_error("transfer error: dimension mismatch for tensor '" +
                                     src_named[i].first + "'");
        }
        dst_named[i].second->data = src_named[i].second->data;
    }

    std::unordered_map<std::string, int> src_index;
    for (size_t i = 0; i < src.vocab_terms.size(); ++i) {
        src_index.emplace(src.vocab_terms[i], static_cast<int>(i));
    }
    const int n = m.config.embedding_dim;
    TransferReport local;
    for (size_t i = 0; i < target_vocab.size(); ++i) {
        auto it = src_index.find(target_vocab[i]);
        if (it == src_index.end()) {
            ++local.new_words;
            continue;
        }
        ++local.shared_words;
        std::copy(src.embedding.data.begin() + static_cast<size_t>(it->second) * n,
                  src.embedding.data.begin() + static_cast<size_t>(it->second + 1) * n,
                  m.embedding.data.begin() + i * static_cast<size_t>(n));
    }
    if (report) *report = local;
    return m;
}

}  // namespace fintext
