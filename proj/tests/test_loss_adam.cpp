#include <doctest.h>

#include <cmath>

#include "evolab/core/adam.hpp"
#include "evolab/core/loss.hpp"
#include "evolab/core/rng.hpp"
#include "oracle_helpers.hpp"

using namespace evolab;

TEST_SUITE("loss") {

TEST_CASE("cross entropy on uniform logits is ln C") {
    Tensor logits({10});
    auto [loss, grad] = softmax_cross_entropy(logits, 3);
    CHECK(loss == doctest::Approx(std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("cross entropy is shift invariant") {
    Rng rng(5);
    Tensor logits = oracle::random_tensor({10}, rng, 2.0);
    auto a = softmax_cross_entropy(logits, 4);
    for (double& v : logits.data) v += 57.5;
    auto b = softmax_cross_entropy(logits, 4);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-12));
    for (std::size_t i = 0; i < a.grad.numel(); ++i) {
        CHECK(a.grad.data[i] == doctest::Approx(b.grad.data[i]).epsilon(1e-9));
    }
}

TEST_CASE("cross entropy target out of range") {
    Tensor logits({5});
    CHECK_THROWS_AS(softmax_cross_entropy(logits, 5), IndexError);
    CHECK_THROWS_AS(softmax_cross_entropy(logits, -1), IndexError);
}

TEST_CASE("cross entropy gradient matches finite differences") {
    Rng rng(6);
    for (int inst = 0; inst < 20; ++inst) {
        Tensor logits = oracle::random_tensor({7}, rng, 2.0);
        const int target = static_cast<int>(rng.index(7));
        auto analytic = softmax_cross_entropy(logits, target);
        auto numeric = oracle::central_diff(
            logits.data, [&] { return softmax_cross_entropy(logits, target).loss; });
        CHECK(oracle::max_abs_err(analytic.grad.data, numeric) <= 1e-8);
    }
}

TEST_CASE("batched cross entropy averages rows") {
    Tensor logits({2, 4});
    logits.data = {0, 0, 0, 0, 10, 0, 0, 0};
    const int targets[2] = {1, 0};
    auto r = softmax_cross_entropy(logits, std::span<const int>(targets, 2));
    const double row0 = std::log(4.0);
    const double row1 = -std::log(std::exp(10.0) / (std::exp(10.0) + 3.0));
    CHECK(r.loss == doctest::Approx(0.5 * (row0 + row1)).epsilon(1e-12));
}

TEST_CASE("mse hand values and zero case") {
    Tensor a = Tensor::from({2}, {1, 1});
    Tensor b = Tensor::from({2}, {0, 0});
    auto r = mse_loss(a, b);
    CHECK(r.loss == doctest::Approx(1.0));

    auto z = mse_loss(a, a);
    CHECK(z.loss == 0.0);
    for (double v : z.grad.data) CHECK(v == 0.0);
}

TEST_CASE("mse gradient matches finite differences") {
    Rng rng(8);
    for (int inst = 0; inst < 20; ++inst) {
        Tensor pred = oracle::random_tensor({3, 4}, rng);
        Tensor target = oracle::random_tensor({3, 4}, rng);
        auto analytic = mse_loss(pred, target);
        auto numeric = oracle::central_diff(pred.data, [&] { return mse_loss(pred, target).loss; });
        CHECK(oracle::max_abs_err(analytic.grad.data, numeric) <= 1e-8);
    }
}

TEST_CASE("mse shape mismatch") {
    Tensor a({2, 3}), b({3, 2});
    CHECK_THROWS_AS(mse_loss(a, b), DimensionError);
}

}  // TEST_SUITE

namespace {

// Straight-from-the-equations scalar ADAM, kept independent of the kernel
// implementation path.
struct ScalarAdamOracle {
    double m = 0.0, v = 0.0;
    long long t = 0;

    double step(double p, double g, const SolverConfig& c) {
        t += 1;
        m = c.beta1 * m + (1.0 - c.beta1) * g;
        v = c.beta2 * v + (1.0 - c.beta2) * (g * g);
        const double mhat = m / (1.0 - std::pow(c.beta1, static_cast<double>(t)));
        const double vhat = v / (1.0 - std::pow(c.beta2, static_cast<double>(t)));
        const double decayed = p * (1.0 - c.learning_rate * c.weight_decay);
        return decayed - c.learning_rate * (mhat / (std::sqrt(vhat) + c.epsilon));
    }
};

}  // namespace

TEST_SUITE("adam") {

TEST_CASE("single step hand-evaluated") {
    Tensor p({1});
    Tensor g = Tensor::from({1}, {1.0});
    std::vector<Tensor*> params{&p};
    AdamState st = AdamState::init(params);
    SolverConfig cfg;
    cfg.learning_rate = 1e-4;
    cfg.weight_decay = 0.0;
    adam_step(params, std::span<const Tensor>(&g, 1), st, cfg);
    CHECK(st.t == 1);
    CHECK(p.data[0] == doctest::Approx(-9.9999999e-5).epsilon(1e-9));
}

TEST_CASE("zero gradient with zero weight decay is identity") {
    Rng rng(9);
    Tensor p = oracle::random_tensor({17}, rng);
    Tensor saved = p;
    Tensor g({17});
    std::vector<Tensor*> params{&p};
    AdamState st = AdamState::init(params);
    SolverConfig cfg;
    adam_step(params, std::span<const Tensor>(&g, 1), st, cfg);
    CHECK(st.t == 1);
    CHECK(p.data == saved.data);
}

TEST_CASE("non-finite gradient is rejected") {
    Tensor p({2});
    Tensor g({2});
    g.data[1] = std::nan("");
    std::vector<Tensor*> params{&p};
    AdamState st = AdamState::init(params);
    CHECK_THROWS_AS(adam_step(params, std::span<const Tensor>(&g, 1), st, SolverConfig{}), NumericError);
}

TEST_CASE("100-step trajectory matches scalar oracle for both solver sets") {
    // support: lr 1e-4, wd 0.1, betas 0.99/0.999 ; selfish: lr 1e-4, wd 0, 0.9/0.999
    SolverConfig support{1e-4, 0.1, 0.99, 0.999, 1e-8};
    SolverConfig selfish{1e-4, 0.0, 0.9, 0.999, 1e-8};
    for (const SolverConfig& cfg : {support, selfish}) {
        Rng rng(100);
        Tensor p = Tensor::from({1}, {0.35});
        std::vector<Tensor*> params{&p};
        AdamState st = AdamState::init(params);
        ScalarAdamOracle oracle_state;
        double oracle_p = 0.35;
        for (int step = 0; step < 100; ++step) {
            Tensor g = Tensor::from({1}, {rng.normal()});
            adam_step(params, std::span<const Tensor>(&g, 1), st, cfg);
            oracle_p = oracle_state.step(oracle_p, g.data[0], cfg);
            CHECK(std::fabs(p.data[0] - oracle_p) <= 1e-12);
        }
    }
}

TEST_CASE("invalid solver configs rejected") {
    SolverConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    bad = SolverConfig{};
    bad.beta1 = 1.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    bad = SolverConfig{};
    bad.weight_decay = -0.5;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

}  // TEST_SUITE
