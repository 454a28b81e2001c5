#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace fintext {

using Rng = std::mt19937_64;

// Dense row-major 64-bit array. Value-semantic; shapes are small.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s);

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

    size_t size() const { return data.size(); }
    int rows() const { return shape.empty() ? 0 : shape[0]; }
    int cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

    void fill(double v);
    bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

// Entries i.i.d. uniform on +-sqrt(6 / (fan_in + fan_out)); shape must be 2-D.
Tensor xavier_init(const std::vector<int>& shape, Rng& rng);

Tensor uniform_init(const std::vector<int>& shape, double low, double high, Rng& rng);

struct AdamState {
    int64_t step = 0;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<Tensor> m;
    std::vector<Tensor> v;

    // Lazily sized to the parameter list on the first step.
    void reset() {
        step = 0;
        m.clear();
        v.clear();
    }
};

// One Adam update with bias correction over a parameter list; grads aligned
// with params. Shapes must be congruent with the state once initialized.
void adam_step(AdamState& state, std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads);

// Max relative error between analytic gradients and central differences.
// `loss` is re-evaluated while params are perturbed in place.
double grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                  const std::vector<const Tensor*>& analytic_grads, double eps = 1e-5);

}  // namespace fintext
