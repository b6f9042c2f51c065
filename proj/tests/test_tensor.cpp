#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glyphgrow/optim.hpp"
#include "glyphgrow/rng.hpp"
#include "glyphgrow/tensor.hpp"

using namespace glyphgrow;

namespace {

Tensor randt(Shape shape, std::uint64_t seed, bool trainable = true, float stddev = 1.0f) {
    Rng rng(seed);
    std::vector<float> d(static_cast<std::size_t>(numel(shape)));
    for (auto& v : d) v = rng.next_normal(0.0f, stddev);
    return Tensor::from_data(std::move(shape), std::move(d), trainable);
}

}  // namespace

TEST_CASE("matmul identity and direct arithmetic", "[tensor]") {
    Tensor a = Tensor::from_data({3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    Tensor eye = Tensor::from_data({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    Tensor out = matmul(a, eye);
    CHECK(out.data() == a.data());

    Tensor b = Tensor::from_data({2, 2}, {1, 2, 3, 4});
    Tensor ones = Tensor::from_data({2, 1}, {1, 1});
    Tensor prod = matmul(b, ones);
    CHECK(prod.data() == std::vector<float>{3, 7});

    CHECK_THROWS_AS(matmul(a, b), ShapeError);
}

TEST_CASE("matmul gradient matches finite differences", "[tensor]") {
    ParamSet ps;
    ps.add("A", randt({3, 4}, 11), true);
    ps.add("B", randt({4, 5}, 22), true);
    auto f = [&] { return sum_all(matmul(ps.at("A"), ps.at("B"))); };
    FdReport rep = finite_diff_check(f, ps, 1e-3f);
    CHECK(rep.max_rel_err < 1e-3f);
    CHECK(rep.checked == 3 * 4 + 4 * 5);
}

TEST_CASE("batched matmul gradient matches finite differences", "[tensor]") {
    ParamSet ps;
    ps.add("A", randt({2, 3, 3, 4}, 31), true);
    ps.add("B", randt({2, 3, 4, 2}, 32), true);
    auto f = [&] { return sum_all(matmul(ps.at("A"), ps.at("B"))); };
    CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
}

TEST_CASE("softmax rows: uniformity, stability, gradient", "[tensor]") {
    Tensor z = Tensor::zeros({1, 4});
    auto s = softmax_rows(z);
    for (float v : s.data()) CHECK(v == Catch::Approx(0.25).margin(1e-7));

    Tensor big = Tensor::from_data({1, 2}, {1000.0f, 1000.0f});
    auto sb = softmax_rows(big);
    CHECK(sb.data()[0] == Catch::Approx(0.5).margin(1e-7));
    CHECK(sb.data()[1] == Catch::Approx(0.5).margin(1e-7));

    ParamSet ps;
    ps.add("x", randt({3, 5}, 7), true);
    Tensor w = randt({3, 5}, 8, false);
    auto f = [&] { return sum_all(mul(softmax_rows(ps.at("x")), w)); };
    CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
}

TEST_CASE("softmax rows sum to one for random finite inputs", "[tensor]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Tensor x = randt({4, 9}, 100 + seed, false, 10.0f);
        auto s = softmax_rows(x);
        for (int r = 0; r < 4; ++r) {
            double sum = 0.0;
            for (int j = 0; j < 9; ++j) sum += s.data()[r * 9 + j];
            REQUIRE(std::abs(sum - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("cross entropy: uniform, saturated, oracle", "[tensor]") {
    Tensor uniform = Tensor::zeros({3, 256});
    Tensor l1 = cross_entropy_mean(uniform, {5, 99, 255}, -1);
    CHECK(l1.scalar() == Catch::Approx(std::log(256.0)).margin(1e-4));

    std::vector<float> conf(2 * 4, 0.0f);
    conf[0 * 4 + 1] = 30.0f;
    conf[1 * 4 + 2] = 30.0f;
    Tensor l2 = cross_entropy_mean(Tensor::from_data({2, 4}, conf), {1, 2}, -1);
    CHECK(l2.scalar() < 1e-9f);

    // random case against an independent log-sum-exp computation
    Tensor logits = randt({4, 7}, 55, false, 2.0f);
    std::vector<int> targets = {3, 0, -1, 6};  // one ignored row
    double expect = 0.0;
    int kept = 0;
    for (int r = 0; r < 4; ++r) {
        if (targets[r] == -1) continue;
        double lse = 0.0;
        for (int j = 0; j < 7; ++j) lse += std::exp(static_cast<double>(logits.data()[r * 7 + j]));
        expect += std::log(lse) - logits.data()[r * 7 + targets[r]];
        ++kept;
    }
    expect /= kept;
    Tensor l3 = cross_entropy_mean(logits, targets, -1);
    CHECK(l3.scalar() == Catch::Approx(expect).margin(1e-5));

    CHECK_THROWS_AS(cross_entropy_mean(logits, {-1, -1, -1, -1}, -1), UndefinedLossError);
}

TEST_CASE("cross entropy gradient matches finite differences", "[tensor]") {
    ParamSet ps;
    ps.add("logits", randt({5, 6}, 77), true);
    std::vector<int> targets = {1, 4, 0, -1, 3};
    auto f = [&] { return cross_entropy_mean(ps.at("logits"), targets, -1); };
    CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
}

TEST_CASE("elementwise and shaping ops match finite differences", "[tensor]") {
    Tensor w = randt({2, 6}, 9, false);

    SECTION("add + scale") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        ps.add("b", randt({2, 6}, 2), true);
        auto f = [&] { return sum_all(mul(scale(add(ps.at("a"), ps.at("b")), 1.7f), w)); };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
    }
    SECTION("add_bias") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        ps.add("bias", randt({6}, 3), true);
        auto f = [&] { return sum_all(mul(add_bias(ps.at("a"), ps.at("bias")), w)); };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
    }
    SECTION("gelu") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        auto f = [&] { return sum_all(mul(gelu(ps.at("a")), w)); };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
    }
    SECTION("layer_norm") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        ps.add("g", randt({6}, 4), true);
        ps.add("bias", randt({6}, 3), true);
        auto f = [&] {
            return sum_all(mul(layer_norm(ps.at("a"), ps.at("g"), ps.at("bias")), w));
        };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 2e-3f);
    }
    SECTION("concat_last") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        ps.add("b", randt({2, 6}, 2), true);
        Tensor w2 = randt({2, 12}, 10, false);
        auto f = [&] {
            return sum_all(mul(concat_last({ps.at("a"), ps.at("b")}), w2));
        };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
    }
    SECTION("permute + reshape") {
        ParamSet ps;
        ps.add("a", randt({2, 6}, 1), true);
        auto f = [&] {
            Tensor p = permute(reshape(ps.at("a"), {2, 3, 2}), {1, 0, 2});
            return sum_all(mul(reshape(p, {2, 6}), w));
        };
        CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
    }
}

TEST_CASE("embedding lookup: frozen tables get no grad, trainable tables do", "[tensor]") {
    Tensor frozen_table = randt({10, 4}, 5, false);
    Tensor trainable_table = randt({10, 4}, 6, true);
    std::vector<int> ids = {1, 3, 3, 9};

    Tensor x = lookup_rows(frozen_table, ids, {4});
    Tensor y = lookup_rows(trainable_table, ids, {4});
    Tensor loss = sum_all(add(x, y));
    backward(loss);
    CHECK_FALSE(frozen_table.has_grad());
    REQUIRE(trainable_table.has_grad());
    // row 3 appears twice, row 0 never
    CHECK(trainable_table.grad()[3 * 4] == 2.0f);
    CHECK(trainable_table.grad()[0] == 0.0f);

    CHECK_THROWS_AS(lookup_rows(frozen_table, {10}, {1}), Error);
}

TEST_CASE("lookup gradient matches finite differences", "[tensor]") {
    ParamSet ps;
    ps.add("table", randt({6, 3}, 21), true);
    Tensor w = randt({4, 3}, 22, false);
    std::vector<int> ids = {0, 2, 2, 5};
    auto f = [&] { return sum_all(mul(lookup_rows(ps.at("table"), ids, {4}), w)); };
    CHECK(finite_diff_check(f, ps, 1e-3f).max_rel_err < 1e-3f);
}

TEST_CASE("backward: ones for sum, stale graph rejected", "[tensor]") {
    Tensor x = randt({2, 2}, 1, true);
    Tensor loss = sum_all(x);
    backward(loss);
    REQUIRE(x.has_grad());
    for (float g : x.grad()) CHECK(g == 1.0f);

    CHECK_THROWS_AS(backward(loss), StaleGraphError);
}

TEST_CASE("backward requires a scalar loss", "[tensor]") {
    Tensor x = randt({2, 2}, 1, true);
    CHECK_THROWS_AS(backward(x), ShapeError);
}

TEST_CASE("optimizer_step: SGD and AdamW reference updates", "[tensor]") {
    SECTION("sgd") {
        ParamSet ps;
        ps.add("w", Tensor::from_data({1}, {1.0f}), true);
        ps.at("w").node()->grad_buf()[0] = 2.0f;
        OptimizerState st;
        st.algo = OptimizerState::Algo::SGD;
        st.lr = 0.1f;
        optimizer_step(ps, st);
        CHECK(ps.at("w").data()[0] == Catch::Approx(0.8f));
        CHECK_FALSE(ps.at("w").has_grad());  // grads cleared
    }
    SECTION("adamw first step, bias-corrected") {
        ParamSet ps;
        ps.add("w", Tensor::from_data({1}, {0.0f}), true);
        ps.at("w").node()->grad_buf()[0] = 1.0f;
        OptimizerState st;
        st.algo = OptimizerState::Algo::AdamW;
        st.lr = 1e-3f;
        st.weight_decay = 0.0f;
        optimizer_step(ps, st);
        // mhat = 1, vhat = 1 -> w = -lr * 1/(1 + eps)
        CHECK(ps.at("w").data()[0] == Catch::Approx(-1e-3f).epsilon(1e-4));
        CHECK(st.m.count("w") == 1);
        CHECK(st.v.count("w") == 1);
    }
    SECTION("all-frozen mask leaves bytes untouched") {
        ParamSet ps;
        ps.add("w", Tensor::from_data({2}, {1.5f, -2.5f}), false);
        auto before = ps.at("w").data();
        OptimizerState st;
        optimizer_step(ps, st);
        CHECK(ps.at("w").data() == before);
        CHECK(st.m.empty());
    }
    SECTION("missing grad on trainable param") {
        ParamSet ps;
        ps.add("w", Tensor::from_data({1}, {1.0f}), true);
        OptimizerState st;
        CHECK_THROWS_AS(optimizer_step(ps, st), Error);
    }
}

TEST_CASE("finite_diff_check sanity on closed forms", "[tensor]") {
    // f = x^2 at x=3: derivative 6, central differences are exact on quadratics
    ParamSet ps;
    ps.add("x", Tensor::from_data({1}, {3.0f}), true);
    auto f = [&] { return sum_all(mul(ps.at("x"), ps.at("x"))); };
    FdReport rep = finite_diff_check(f, ps, 1e-3f);
    CHECK(rep.max_rel_err < 1e-4f);

    // linear functions sit at the f32 noise floor
    Tensor w = randt({3, 3}, 42, false);
    ParamSet ps2;
    ps2.add("y", randt({3, 3}, 43), true);
    auto g = [&] { return sum_all(mul(ps2.at("y"), w)); };
    CHECK(finite_diff_check(g, ps2, 1e-3f).max_rel_err < 1e-3f);
}

TEST_CASE("causal mask blocks attention to the future", "[tensor]") {
    Tensor s = Tensor::zeros({1, 1, 3, 3});
    Tensor masked = causal_mask(s);
    auto probs = softmax_rows(masked);
    // row 0 attends only to position 0
    CHECK(probs.data()[0] == Catch::Approx(1.0));
    CHECK(probs.data()[1] == Catch::Approx(0.0).margin(1e-12));
    // row 2 attends to all three equally
    CHECK(probs.data()[6] == Catch::Approx(1.0 / 3).margin(1e-6));
}
