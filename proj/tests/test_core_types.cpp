#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "evolab/core/checkpoint.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/core/tensor.hpp"
#include "evolab/models/zoo.hpp"
#include "oracle_helpers.hpp"

using namespace evolab;

TEST_SUITE("tensor") {

TEST_CASE("shape/data consistency enforced") {
    CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
    Tensor t({2, 3});
    CHECK(t.numel() == 6);
    CHECK_THROWS_AS(t.reshaped({4}), DimensionError);
    CHECK(t.reshaped({3, 2}).shape == Shape{3, 2});
}

TEST_CASE("indexing bounds") {
    Tensor t({2, 2});
    t.at({1, 0}) = 5.0;
    CHECK(t.at({1, 0}) == 5.0);
    CHECK_THROWS_AS(t.at({2, 0}), IndexError);
    CHECK_THROWS_AS(t.at({0}), IndexError);
}

TEST_CASE("rng determinism and uniform range") {
    Rng a(77), b(77);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(78);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

}  // TEST_SUITE

TEST_SUITE("checkpoint") {

TEST_CASE("snapshot/restore round trip is bit exact") {
    ModelSpec spec;
    Model m = build_classifier(spec, 99);
    Checkpoint ckpt = m.snapshot();

    // mutate every parameter, then restore
    for (Tensor* p : m.params())
        for (double& v : p->data) v += 1.25;
    m.restore(ckpt);

    auto ps = m.params();
    std::size_t idx = 0;
    for (const Tensor* p : ps) {
        CHECK(p->data == ckpt.tensors[idx].data);
        ++idx;
    }
}

TEST_CASE("hash stable across snapshots of an unmutated model") {
    Model m = build_classifier(ModelSpec{}, 5);
    CHECK(m.snapshot().hash == m.snapshot().hash);
}

TEST_CASE("file round trip and corruption detection") {
    Rng rng(3);
    Model m = build_classifier(ModelSpec{}, 3);
    Checkpoint ckpt = m.snapshot();
    const std::string path = (std::filesystem::temp_directory_path() / "evolab_ckpt_test.seck").string();
    save_checkpoint(path, ckpt);
    Checkpoint loaded = load_checkpoint(path);
    CHECK(loaded.hash == ckpt.hash);
    CHECK(loaded.tensors.size() == ckpt.tensors.size());
    for (std::size_t i = 0; i < loaded.tensors.size(); ++i) {
        CHECK(loaded.tensors[i].data == ckpt.tensors[i].data);
    }

    // flip one payload byte
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(64);
        char c;
        f.seekg(64);
        f.read(&c, 1);
        c ^= 0x40;
        f.seekp(64);
        f.write(&c, 1);
    }
    CHECK_THROWS_AS(load_checkpoint(path), CorruptionError);
    std::filesystem::remove(path);
}

TEST_CASE("architecture mismatch rejected") {
    Model lenet = build_classifier(ModelSpec{}, 1);
    ModelSpec wide;
    wide.conv1 = 8;
    Model other = build_classifier(wide, 1);
    CHECK_THROWS_AS(other.restore(lenet.snapshot()), CheckpointError);
}

}  // TEST_SUITE

TEST_SUITE("models") {

TEST_CASE("classifier forward is a probability simplex point") {
    Model m = build_classifier(ModelSpec{}, 42);
    Rng rng(1);
    Tensor x = oracle::random_tensor({1, 1, 28, 28}, rng, 0.5);
    Tensor y = m.forward(x);
    CHECK(y.shape == Shape{1, 10});
    double s = 0.0;
    for (double v : y.data) {
        CHECK(v >= 0.0);
        s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classifier parameter count at reference widths") {
    Model m = build_classifier(ModelSpec{}, 0);
    // conv1 6x(1*25)+6, conv2 16x(6*25)+16, fc 256*120+120, 120*84+84, 84*10+10
    CHECK(m.param_count() == 44426);
    CHECK(m.param_count() >= 44000);
    CHECK(m.param_count() <= 440000);
}

TEST_CASE("same seed gives identical initial parameters") {
    Model a = build_classifier(ModelSpec{}, 7);
    Model b = build_classifier(ModelSpec{}, 7);
    CHECK(a.snapshot().hash == b.snapshot().hash);
    Model c = build_classifier(ModelSpec{}, 8);
    CHECK(a.snapshot().hash != c.snapshot().hash);
}

TEST_CASE("encoder-decoder shape contract and finiteness") {
    ModelSpec spec;
    spec.input_shape = {2, 32, 32};
    Model m = build_encoder_decoder(spec, 11);
    Tensor x({1, 2, 32, 32});
    Tensor y = m.forward(x);
    CHECK(y.shape == Shape{1, 1, 32, 32});
    CHECK(y.all_finite());
}

TEST_CASE("encoder-decoder rejects indivisible spatial dims") {
    ModelSpec spec;
    spec.input_shape = {2, 36, 36};  // 36 / 2^3 is not integral
    CHECK_THROWS_AS(build_encoder_decoder(spec, 0), SpecError);
}

TEST_CASE("e2l image variant has exactly half widths and cube-depth input") {
    ModelSpec primary;
    primary.input_shape = {2, 32, 32};
    primary.cube_depth = 15;
    Model e2l = build_e2l(primary, TaskKind::e2l_image, 0);
    CHECK(e2l.spec().enc_widths == std::vector<std::size_t>{8, 16, 32});
    Tensor cube({1, 15, 32, 32});
    Tensor y = e2l.forward(cube);
    CHECK(y.shape == Shape{1, 1, 32, 32});
}

TEST_CASE("e2l classification consumes strip and emits simplex point") {
    ModelSpec primary;
    primary.strip_steps = 30;
    primary.classes = 10;
    Model e2l = build_e2l(primary, TaskKind::e2l_classification, 0);
    Rng rng(2);
    Tensor strip = oracle::random_tensor({1, 1, 30, 10}, rng, 0.2);
    Tensor y = e2l.forward(strip);
    CHECK(y.shape == Shape{1, 10});
    double s = 0.0;
    for (double v : y.data) {
        CHECK(v >= 0.0);
        s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("end-to-end gradient check on reduced classifier") {
    ModelSpec spec;
    spec.input_shape = {1, 16, 16};
    spec.conv1 = 2;
    spec.conv2 = 3;
    spec.fc1 = 8;
    spec.fc2 = 6;
    spec.classes = 4;
    Model m = build_classifier(spec, 31);
    Rng rng(32);
    // move every parameter (biases included) to a generic point: zero biases
    // park relu inputs exactly on their kinks over zero-padded regions, where
    // finite differences are undefined
    for (Tensor* p : m.params())
        for (double& v : p->data) v += 0.05 * rng.normal();
    Tensor x = oracle::random_tensor({2, 1, 16, 16}, rng, 0.5);

    std::vector<LayerCache> caches;
    Tensor y = m.forward(x, &caches);
    Tensor w = oracle::random_tensor(y.shape, rng);
    std::vector<Tensor> grads = m.make_grad_buffers();
    Tensor dx = m.backward(caches, w, grads);

    auto scalar = [&] {
        Tensor out = m.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < out.numel(); ++i) s += w.data[i] * out.data[i];
        return s;
    };

    CHECK(oracle::max_rel_err_filtered(dx.data, x.data, scalar) <= 1e-4);

    auto params = m.params();
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        CHECK(oracle::max_rel_err_filtered(grads[pi].data, params[pi]->data, scalar) <= 1e-4);
    }
}

TEST_CASE("end-to-end gradient check on reduced encoder-decoder") {
    ModelSpec spec;
    spec.input_shape = {2, 8, 8};
    spec.enc_widths = {2, 4};
    Model m = build_encoder_decoder(spec, 41);
    Rng rng(42);
    for (Tensor* p : m.params())
        for (double& v : p->data) v += 0.05 * rng.normal();
    Tensor x = oracle::random_tensor({1, 2, 8, 8}, rng, 0.5);

    std::vector<LayerCache> caches;
    Tensor y = m.forward(x, &caches);
    Tensor w = oracle::random_tensor(y.shape, rng);
    std::vector<Tensor> grads = m.make_grad_buffers();
    Tensor dx = m.backward(caches, w, grads);

    auto scalar = [&] {
        Tensor out = m.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < out.numel(); ++i) s += w.data[i] * out.data[i];
        return s;
    };
    CHECK(oracle::max_rel_err_filtered(dx.data, x.data, scalar) <= 1e-4);

    auto params = m.params();
    for (std::size_t pi : {std::size_t(0), params.size() / 2, params.size() - 1}) {
        CHECK(oracle::max_rel_err_filtered(grads[pi].data, params[pi]->data, scalar) <= 1e-4);
    }
}

}  // TEST_SUITE
