#include <doctest.h>

#include "evolab/core/layers.hpp"
#include "evolab/core/rng.hpp"
#include "oracle_helpers.hpp"

using namespace evolab;

namespace {

void init_layer(Layer& l, Rng& rng) {
    for (Tensor* p : l.params())
        for (double& v : p->data) v = 0.5 * rng.normal();
}

}  // namespace

TEST_SUITE("layers") {

TEST_CASE("relu forward hand values") {
    ReluLayer relu;
    Tensor x = Tensor::from({1, 3}, {-1, 0, 2});
    Tensor y = relu.forward(x, nullptr);
    CHECK(y.data == std::vector<double>{0, 0, 2});
}

TEST_CASE("max_pool 2x2 hand values") {
    MaxPool2x2Layer pool;
    Tensor x = Tensor::from({1, 1, 2, 2}, {1, 2, 3, 4});
    Tensor y = pool.forward(x, nullptr);
    CHECK(y.shape == Shape{1, 1, 1, 1});
    CHECK(y.data[0] == 4);
}

TEST_CASE("max_pool drops odd trailing row/col") {
    MaxPool2x2Layer pool;
    Tensor x({1, 1, 5, 3});
    for (std::size_t i = 0; i < x.numel(); ++i) x.data[i] = static_cast<double>(i);
    Tensor y = pool.forward(x, nullptr);
    CHECK(y.shape == Shape{1, 1, 2, 1});
}

TEST_CASE("softmax rows sum to one and shift invariance") {
    SoftmaxLayer sm;
    Rng rng(11);
    Tensor x = oracle::random_tensor({4, 10}, rng, 3.0);
    Tensor y = sm.forward(x, nullptr);
    for (std::size_t r = 0; r < 4; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < 10; ++j) s += y.data[r * 10 + j];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t j = 0; j < 10; ++j) CHECK(y.data[r * 10 + j] >= 0.0);
    }
    Tensor xs = x;
    for (double& v : xs.data) v += 123.25;
    Tensor ys = sm.forward(xs, nullptr);
    for (std::size_t i = 0; i < y.numel(); ++i) {
        CHECK(ys.data[i] == doctest::Approx(y.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("conv2d spec example: random 1x4x4 input, one 3x3 filter") {
    Rng rng(1234);
    for (int inst = 0; inst < 5; ++inst) {
        Conv2dLayer conv(1, 1, 3, 0);
        init_layer(conv, rng);
        Tensor x = oracle::random_tensor({1, 1, 4, 4}, rng);
        auto r = oracle::grad_check_layer(conv, x, rng);
        CHECK(r.input_err <= 1e-6);
        CHECK(r.param_err <= 1e-6);
    }
}

// Gradient suite: every layer kind against central differences,
// h = 1e-5, double precision, >= 20 random instances each.
TEST_CASE("gradient checks: dense") {
    Rng rng(21);
    for (int inst = 0; inst < 20; ++inst) {
        DenseLayer dense(7, 5);
        init_layer(dense, rng);
        Tensor x = oracle::random_tensor({3, 7}, rng);
        auto r = oracle::grad_check_layer(dense, x, rng);
        CHECK(r.input_err <= 1e-4);
        CHECK(r.param_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: dense with implicit flatten") {
    Rng rng(22);
    for (int inst = 0; inst < 20; ++inst) {
        DenseLayer dense(12, 4);
        init_layer(dense, rng);
        Tensor x = oracle::random_tensor({2, 3, 2, 2}, rng);
        auto r = oracle::grad_check_layer(dense, x, rng);
        CHECK(r.input_err <= 1e-4);
        CHECK(r.param_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: relu") {
    Rng rng(23);
    for (int inst = 0; inst < 20; ++inst) {
        ReluLayer relu;
        Tensor x = oracle::random_tensor({2, 9}, rng);
        auto r = oracle::grad_check_layer(relu, x, rng);
        CHECK(r.input_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: conv2d padded and valid") {
    Rng rng(24);
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t pad = inst % 2;
        Conv2dLayer conv(2, 3, 3, pad);
        init_layer(conv, rng);
        Tensor x = oracle::random_tensor({2, 2, 6, 5}, rng);
        auto r = oracle::grad_check_layer(conv, x, rng);
        CHECK(r.input_err <= 1e-4);
        CHECK(r.param_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: max_pool") {
    Rng rng(25);
    for (int inst = 0; inst < 20; ++inst) {
        MaxPool2x2Layer pool;
        Tensor x = oracle::random_tensor({2, 2, 6, 6}, rng);
        auto r = oracle::grad_check_layer(pool, x, rng);
        CHECK(r.input_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: tconv2d upsampling") {
    Rng rng(26);
    for (int inst = 0; inst < 20; ++inst) {
        TConv2dLayer tconv(3, 2, 4, 2, 1);
        init_layer(tconv, rng);
        Tensor x = oracle::random_tensor({2, 3, 4, 3}, rng);
        auto r = oracle::grad_check_layer(tconv, x, rng);
        CHECK(r.input_err <= 1e-4);
        CHECK(r.param_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: tconv2d stride 1") {
    Rng rng(27);
    for (int inst = 0; inst < 20; ++inst) {
        TConv2dLayer tconv(2, 2, 3, 1, 0);
        init_layer(tconv, rng);
        Tensor x = oracle::random_tensor({1, 2, 5, 5}, rng);
        auto r = oracle::grad_check_layer(tconv, x, rng);
        CHECK(r.input_err <= 1e-4);
        CHECK(r.param_err <= 1e-4);
    }
}

TEST_CASE("gradient checks: softmax") {
    Rng rng(28);
    for (int inst = 0; inst < 20; ++inst) {
        SoftmaxLayer sm;
        Tensor x = oracle::random_tensor({3, 6}, rng, 2.0);
        auto r = oracle::grad_check_layer(sm, x, rng);
        CHECK(r.input_err <= 1e-4);
    }
}

TEST_CASE("tconv2d output geometry") {
    TConv2dLayer t(1, 1, 4, 2, 1);
    CHECK(t.out_shape({1, 4, 4}) == Shape{1, 8, 8});
    TConv2dLayer t2(1, 1, 2, 2, 0);
    CHECK(t2.out_shape({1, 3, 5}) == Shape{1, 6, 10});
}

TEST_CASE("shape mismatch raises dimension errors") {
    DenseLayer dense(4, 2);
    Tensor x({2, 5});
    CHECK_THROWS_AS(dense.forward(x, nullptr), DimensionError);

    Conv2dLayer conv(2, 1, 3, 0);
    Tensor img({1, 3, 8, 8});
    CHECK_THROWS_AS(conv.forward(img, nullptr), DimensionError);
}

}  // TEST_SUITE
