#include <cmath>
#include <vector>

#include "doctest.h"
#include "fintext/tensor.hpp"

using namespace fintext;

TEST_CASE("xavier_init bounds, determinism, mean") {
    Rng rng(1);
    const auto t = xavier_init({3, 3}, rng);
    REQUIRE(t.size() == 9);
    for (double v : t.data) CHECK(std::fabs(v) <= 1.0);  // sqrt(6/6)

    Rng a(42), b(42);
    const auto ta = xavier_init({4, 5}, a);
    const auto tb = xavier_init({4, 5}, b);
    CHECK(ta.data == tb.data);

    Rng big(7);
    const auto wide = xavier_init({100, 100}, big);
    double mean = 0;
    for (double v : wide.data) mean += v;
    mean /= static_cast<double>(wide.size());
    CHECK(std::fabs(mean) < 0.01);

    Rng r2(0);
    CHECK_THROWS(xavier_init({3}, r2));
    CHECK_THROWS(xavier_init({2, 2, 2}, r2));
}

TEST_CASE("uniform_init bounds, determinism, mean") {
    Rng rng(3);
    const auto t = uniform_init({50, 20}, -0.1, 0.1, rng);
    for (double v : t.data) {
        CHECK(v >= -0.1);
        CHECK(v <= 0.1);
    }
    Rng a(9), b(9);
    CHECK(uniform_init({10}, -0.1, 0.1, a).data == uniform_init({10}, -0.1, 0.1, b).data);

    Rng big(5);
    const auto wide = uniform_init({100, 100}, -0.1, 0.1, big);
    double mean = 0;
    for (double v : wide.data) mean += v;
    mean /= static_cast<double>(wide.size());
    CHECK(std::fabs(mean) < 0.002);

    Rng r2(0);
    CHECK_THROWS(uniform_init({2, 2}, 0.1, -0.1, r2));
}

TEST_CASE("adam first step and fixed points") {
    Tensor w({1});
    w.data[0] = 1.0;
    Tensor g({1});
    g.data[0] = 5.0;
    AdamState st;
    st.learning_rate = 0.001;
    std::vector<Tensor*> params{&w};
    std::vector<const Tensor*> grads{&g};
    adam_step(st, params, grads);
    // First bias-corrected step moves by ~lr * g/|g|.
    CHECK(w.data[0] == doctest::Approx(1.0 - 0.001).epsilon(1e-6));

    // Zero gradient leaves parameters unchanged.
    Tensor w2({3});
    w2.fill(2.5);
    Tensor g2({3});
    g2.fill(0.0);
    AdamState st2;
    std::vector<Tensor*> p2{&w2};
    std::vector<const Tensor*> gr2{&g2};
    adam_step(st2, p2, gr2);
    for (double v : w2.data) CHECK(v == 2.5);

    // lr = 0 is the identity even with nonzero gradients.
    Tensor w3({2});
    w3.fill(1.5);
    Tensor g3({2});
    g3.fill(4.0);
    AdamState st3;
    st3.learning_rate = 0.0;
    std::vector<Tensor*> p3{&w3};
    std::vector<const Tensor*> gr3{&g3};
    adam_step(st3, p3, gr3);
    for (double v : w3.data) CHECK(v == 1.5);
}

TEST_CASE("adam minimizes a scalar quadratic") {
    Tensor w({1});
    w.data[0] = 0.0;
    AdamState st;
    st.learning_rate = 0.1;
    std::vector<Tensor*> params{&w};
    for (int i = 0; i < 500; ++i) {
        Tensor g({1});
        g.data[0] = 2.0 * (w.data[0] - 3.0);  // d/dw (w-3)^2
        std::vector<const Tensor*> grads{&g};
        adam_step(st, params, grads);
    }
    CHECK(std::fabs(w.data[0] - 3.0) < 0.01);
}

TEST_CASE("adam rejects shape mismatches") {
    Tensor w({2});
    Tensor g({3});
    AdamState st;
    std::vector<Tensor*> p{&w};
    std::vector<const Tensor*> gr{&g};
    CHECK_THROWS(adam_step(st, p, gr));
}

TEST_CASE("grad_check on exact and broken gradients") {
    Tensor w({4});
    const std::vector<double> x{0.3, -1.2, 2.0, 0.7};
    for (size_t i = 0; i < 4; ++i) w.data[i] = 0.1 * static_cast<double>(i + 1);
    auto loss = [&] {
        double s = 0;
        for (size_t i = 0; i < 4; ++i) s += w.data[i] * x[i];
        return s;
    };
    Tensor exact({4});
    for (size_t i = 0; i < 4; ++i) exact.data[i] = x[i];
    std::vector<Tensor*> params{&w};
    std::vector<const Tensor*> grads{&exact};
    CHECK(grad_check(loss, params, grads) < 1e-9);

    Tensor wrong({4});
    for (size_t i = 0; i < 4; ++i) wrong.data[i] = 2.0 * x[i];  // negative control
    std::vector<const Tensor*> bad{&wrong};
    CHECK(grad_check(loss, params, bad) > 0.3);
}
