#include <doctest.h>

#include <cstring>

#include "evolab/core/kernels.hpp"
#include "evolab/core/rng.hpp"
#include "oracle_helpers.hpp"

using namespace evolab;

namespace {

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("matmul identity and hand arithmetic") {
    const auto& k = kern::ops();
    Tensor id = Tensor::from({2, 2}, {1, 0, 0, 1});
    Tensor a = Tensor::from({2, 2}, {3, -1, 2, 5});
    Tensor c({2, 2});
    k.matmul(2, 2, 2, id.data.data(), a.data.data(), c.data.data());
    CHECK(c.data == a.data);

    Tensor m = Tensor::from({2, 2}, {1, 2, 3, 4});
    Tensor v = Tensor::from({2, 1}, {5, 6});
    Tensor out({2, 1});
    k.matmul(2, 2, 1, m.data.data(), v.data.data(), out.data.data());
    CHECK(out.data[0] == doctest::Approx(17));
    CHECK(out.data[1] == doctest::Approx(39));
}

TEST_CASE("matmul matches naive triple loop") {
    Rng rng(42);
    for (int it = 0; it < 5; ++it) {
        Tensor a = oracle::random_tensor({8, 8}, rng);
        Tensor b = oracle::random_tensor({8, 8}, rng);
        Tensor c({8, 8});
        kern::ops().matmul(8, 8, 8, a.data.data(), b.data.data(), c.data.data());
        Tensor ref = oracle::matmul_naive(a, b);
        for (std::size_t i = 0; i < c.numel(); ++i) {
            CHECK(c.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("scalar and avx2 kernels are bit-identical") {
    const kern::Ops* simd = kern::avx2_ops();
    if (!simd) {
        MESSAGE("avx2 unavailable; equivalence suite skipped");
        return;
    }
    const kern::Ops& ref = kern::scalar_ops();
    Rng rng(7);

    // sizes chosen to exercise full vectors plus every tail length
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 257u}) {
        Tensor x = oracle::random_tensor({n}, rng);
        Tensor y = oracle::random_tensor({n}, rng);

        Tensor o1({n}), o2({n});
        ref.add(x.data.data(), y.data.data(), o1.data.data(), n);
        simd->add(x.data.data(), y.data.data(), o2.data.data(), n);
        CHECK(bits_equal(o1.data, o2.data));

        ref.sub(x.data.data(), y.data.data(), o1.data.data(), n);
        simd->sub(x.data.data(), y.data.data(), o2.data.data(), n);
        CHECK(bits_equal(o1.data, o2.data));

        Tensor y1 = y, y2 = y;
        ref.axpy(0.37, x.data.data(), y1.data.data(), n);
        simd->axpy(0.37, x.data.data(), y2.data.data(), n);
        CHECK(bits_equal(y1.data, y2.data));

        Tensor s1 = x, s2 = x;
        ref.scale(-1.93, s1.data.data(), n);
        simd->scale(-1.93, s2.data.data(), n);
        CHECK(bits_equal(s1.data, s2.data));

        ref.relu_fwd(x.data.data(), o1.data.data(), n);
        simd->relu_fwd(x.data.data(), o2.data.data(), n);
        CHECK(bits_equal(o1.data, o2.data));

        ref.relu_bwd(x.data.data(), y.data.data(), o1.data.data(), n);
        simd->relu_bwd(x.data.data(), y.data.data(), o2.data.data(), n);
        CHECK(bits_equal(o1.data, o2.data));
    }

    for (auto [m, kk, n] : std::initializer_list<std::array<std::size_t, 3>>{
             {1, 1, 1}, {3, 5, 7}, {8, 8, 8}, {16, 150, 33}, {5, 2, 121}}) {
        Tensor a = oracle::random_tensor({m, kk}, rng);
        Tensor b = oracle::random_tensor({kk, n}, rng);
        Tensor c1({m, n}), c2({m, n});
        ref.matmul(m, kk, n, a.data.data(), b.data.data(), c1.data.data());
        simd->matmul(m, kk, n, a.data.data(), b.data.data(), c2.data.data());
        CHECK(bits_equal(c1.data, c2.data));
    }

    for (std::size_t n : {1u, 5u, 128u, 1001u}) {
        Tensor p = oracle::random_tensor({n}, rng);
        Tensor g = oracle::random_tensor({n}, rng);
        Tensor m = oracle::random_tensor({n}, rng, 0.1);
        Tensor v = oracle::random_tensor({n}, rng, 0.1);
        for (double& val : v.data) val = std::fabs(val);

        kern::AdamParams ap{1e-4, 0.9, 0.999, 1e-8, 1.0 - 0.9, 1.0 - 0.999, 1.0 - 1e-4 * 0.1};
        Tensor p1 = p, g1 = g, m1 = m, v1 = v;
        Tensor p2 = p, m2 = m, v2 = v;
        ref.adam_update(p1.data.data(), g1.data.data(), m1.data.data(), v1.data.data(), n, ap);
        simd->adam_update(p2.data.data(), g.data.data(), m2.data.data(), v2.data.data(), n, ap);
        CHECK(bits_equal(p1.data, p2.data));
        CHECK(bits_equal(m1.data, m2.data));
        CHECK(bits_equal(v1.data, v2.data));
    }
}

TEST_CASE("kernel dispatch override") {
    kern::set_active("scalar");
    CHECK(kern::active_name() == "scalar");
    kern::set_active("auto");
    if (kern::avx2_supported()) CHECK(kern::active_name() == "avx2");
}

}  // TEST_SUITE
