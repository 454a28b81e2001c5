#include "fintext/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fintext {

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
    size_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw std::invalid_argument("tensor dims must be positive");
        n *= static_cast<size_t>(d);
    }
    data.assign(n, 0.0);
}

void Tensor::fill(double v) {
    std::fill(data.begin(), data.end(), v);
}

Tensor xavier_init(const std::vector<int>& shape, Rng& rng) {
    if (shape.size() != 2) throw std::invalid_argument("xavier_init needs a 2-D shape");
    const double bound = std::sqrt(6.0 / (shape[0] + shape[1]));
    return uniform_init(shape, -bound, bound, rng);
}

Tensor uniform_init(const std::vector<int>& shape, double low, double high, Rng& rng) {
    if (low >= high) throw std::invalid_argument("uniform_init requires low < high");
    Tensor t(shape);
    std::uniform_real_distribution<double> dist(low, high);
    for (auto& x : t.data) x = dist(rng);
    return t;
}

void adam_step(AdamState& state, std::vector<Tensor*>& params,
               const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("adam_step: params/grads length mismatch");
    }
    if (state.m.empty()) {
        for (const Tensor* p : params) {
            state.m.emplace_back(p->shape);
            state.v.emplace_back(p->shape);
        }
    }
    if (state.m.size() != params.size()) {
        throw std::invalid_argument("adam_step: state does not match parameter list");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (size_t k = 0; k < params.size(); ++k) {
        Tensor& p = *params[k];
        const Tensor& g = *grads[k];
        if (!p.same_shape(g) || !p.same_shape(state.m[k])) {
            throw std::invalid_argument("adam_step: shape mismatch");
        }
        Tensor& m = state.m[k];
        Tensor& v = state.v[k];
        for (size_t i = 0; i < p.data.size(); ++i) {
            m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g.data[i];
            v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g.data[i] * g.data[i];
            const double m_hat = m.data[i] / bc1;
            const double v_hat = v.data[i] / bc2;
            p.data[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

double grad_check(const std::function<double()>& loss, const std::vector<Tensor*>& params,
                  const std::vector<const Tensor*>& analytic_grads, double eps) {
    if (params.size() != analytic_grads.size()) {
        throw std::invalid_argument("grad_check: params/grads length mismatch");
    }
    double max_rel = 0.0;
    for (size_t k = 0; k < params.size(); ++k) {
        Tensor& p = *params[k];
        const Tensor& g = *analytic_grads[k];
        for (size_t i = 0; i < p.data.size(); ++i) {
            const double orig = p.data[i];
            p.data[i] = orig + eps;
            const double up = loss();
            p.data[i] = orig - eps;
            const double down = loss();
            p.data[i] = orig;
            if (!std::isfinite(up) || !std::isfinite(down)) {
                throw std::runtime_error("grad_check: non-finite loss");
            }
            const double numeric = (up - down) / (2.0 * eps);
            const double analytic = g.data[i];
            // The 1e-4 floor makes near-zero gradients an absolute-error
            // comparison; central differences carry ~1e-11 rounding noise,
            // which would dominate a purely relative measure.
            const double rel = std::fabs(analytic - numeric) /
                               std::max({std::fabs(analytic), std::fabs(numeric), 1e-4});
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace fintext
