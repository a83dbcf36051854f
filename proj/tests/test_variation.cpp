#include <doctest.h>

#include "chankit/variation.hpp"
#include "support.hpp"

using namespace chankit;

TEST_CASE("variation formula") {
    CHECK(variation_bits(8, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(variation_bits(26, 26) == 0.0);
    // frozen from an arbitrary-precision evaluation of log2(32/26)
    CHECK(variation_bits(26, 32) == doctest::Approx(0.29956028185890784).epsilon(1e-12));
    CHECK_THROWS_AS(variation_bits(0, 4), domain_error);
    CHECK_THROWS_AS(variation_bits(4, 0), domain_error);
}

TEST_CASE("variation is symmetric and scale invariant") {
    testgen::SplitMix64 rng(53);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t t = 1 + rng.next() % 1000;
        const std::uint64_t r = 1 + rng.next() % 1000;
        CHECK(variation_bits(t, r) == variation_bits(r, t));
        const std::uint64_t k = 1 + rng.next() % 1000;
        CHECK(variation_bits(k * t, k * r) == doctest::Approx(variation_bits(t, r)).epsilon(1e-12));
        if (t == r) CHECK(variation_bits(t, r) == 0.0);
        if (t != r) CHECK(variation_bits(t, r) > 0.0);
    }
}

namespace {

SystemOfConstraints three_layer_system() {
    SystemOfConstraints sys;
    sys.id = "sys3";
    sys.layers.push_back(testgen::make_channel("l1", 4, 4, 4));
    sys.layers.push_back(testgen::make_channel("l2", 8, 4, 4));
    sys.layers.push_back(testgen::make_channel("l3", 16, 16, 16));
    return sys;
}

}  // namespace

TEST_CASE("system variation sums included layers") {
    const auto report = system_variation(three_layer_system());
    REQUIRE(report.per_layer.size() == 3);
    CHECK(report.total_v_bits == doctest::Approx(1.0).epsilon(1e-12));  // 0 + 1 + 0
    CHECK(report.excluded_count == 0);
    CHECK(report.per_layer[1].v_bits == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.per_layer[0].s_bound_bits == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.per_layer[2].s_bound_bits == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("fault and ignored layers are excluded from the total") {
    auto sys = three_layer_system();
    sys.layers[1].fault = true;
    const auto report = system_variation(sys);
    CHECK(report.total_v_bits == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.excluded_count == 1);
    CHECK_FALSE(report.per_layer[1].included);
}

TEST_CASE("single optimal layer has zero total variation") {
    SystemOfConstraints sys;
    sys.id = "one";
    sys.layers.push_back(testgen::make_channel("only", 26, 26, 26));
    const auto report = system_variation(sys);
    CHECK(report.total_v_bits == 0.0);
}

TEST_CASE("invalid layers are named") {
    auto sys = three_layer_system();
    sys.layers[2].pairs.clear();
    CHECK_THROWS_WITH_AS(system_variation(sys), doctest::Contains("l3"), validation_error);

    auto dup = three_layer_system();
    dup.layers[1].id = "l1";
    CHECK_THROWS_AS(system_variation(dup), validation_error);

    SystemOfConstraints empty;
    empty.id = "empty";
    CHECK_THROWS_AS(system_variation(empty), validation_error);
}

TEST_CASE("flagging a layer never increases the total") {
    testgen::SplitMix64 rng(59);
    for (int i = 0; i < 50; ++i) {
        SystemOfConstraints sys;
        sys.id = "rand";
        const std::size_t layers = 1 + rng.next() % 5;
        for (std::size_t k = 0; k < layers; ++k) {
            const std::size_t n = 1 + rng.next() % 6;
            auto layer = testgen::make_channel("layer" + std::to_string(k), n + rng.next() % 4,
                                               n + rng.next() % 4, n);
            layer.ignored = (rng.next() % 4) == 0;
            layer.fault = (rng.next() % 4) == 0;
            sys.layers.push_back(std::move(layer));
        }
        const auto base = system_variation(sys);
        auto flagged = sys;
        flagged.layers[rng.next() % layers].ignored = true;
        const auto after = system_variation(flagged);
        CHECK(after.total_v_bits <= base.total_v_bits + 1e-12);

        // total is zero iff every included layer has t = r
        bool all_equal = true;
        for (const auto& row : base.per_layer) {
            if (row.included && row.t != row.r) all_equal = false;
        }
        if (base.total_v_bits == 0.0) CHECK(all_equal);
        if (all_equal) CHECK(base.total_v_bits == 0.0);
    }
}
