#include <cmath>
#include <doctest.h>

#include "chankit/info_core.hpp"
#include "support.hpp"

using namespace chankit;

namespace {

// Independent oracle: plain summation with std::log, no shared code with the
// library path.
double entropy_oracle(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p) / std::log(2.0);
    }
    return h;
}

double conditional_entropy_oracle(const std::vector<std::vector<double>>& table) {
    double h = 0.0;
    for (const auto& row : table) {
        double pa = 0.0;
        for (double p : row) pa += p;
        if (pa <= 0.0) continue;
        for (double p : row) {
            if (p > 0.0) h -= p * std::log(p / pa) / std::log(2.0);
        }
    }
    return h;
}

}  // namespace

TEST_CASE("entropy matches hand-evaluated values") {
    CHECK(entropy(Distribution({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy(Distribution({1.0, 0.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
    // oracle: -(0.5 log2 0.5 + 2 * 0.25 log2 0.25) = 1.5
    const Distribution d({0.5, 0.25, 0.25});
    CHECK(entropy(d) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(entropy(d) == doctest::Approx(entropy_oracle(d.probs())).epsilon(1e-12));
}

TEST_CASE("distribution validation names the violated invariant") {
    CHECK_THROWS_WITH_AS(Distribution({0.45, 0.45}), doctest::Contains("sum"), validation_error);
    CHECK_THROWS_AS(Distribution({-0.1, 1.1}), validation_error);
    CHECK_THROWS_AS(Distribution({1.2}), validation_error);
    CHECK_THROWS_AS(Distribution({0.5, 0.5}, 1), validation_error);  // t below support
    CHECK_NOTHROW(Distribution({0.5, 0.5}, 7));
}

TEST_CASE("entropy bound") {
    CHECK(entropy_bound(1) == 0.0);
    CHECK(entropy_bound(8) == 3.0);
    // frozen from an arbitrary-precision evaluation of log2 26
    CHECK(entropy_bound(26) == doctest::Approx(4.700439718141092).epsilon(1e-12));
    CHECK_THROWS_AS(entropy_bound(0), domain_error);
}

TEST_CASE("conditional entropy H(B|A)") {
    JointDistribution diag({{0.25, 0, 0, 0}, {0, 0.25, 0, 0}, {0, 0, 0.25, 0}, {0, 0, 0, 0.25}});
    CHECK(conditional_entropy(diag) == doctest::Approx(0.0).epsilon(1e-12));

    JointDistribution indep({{0.25, 0.25}, {0.25, 0.25}});
    CHECK(conditional_entropy(indep) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<std::vector<double>> rows{{0.4, 0.1}, {0.1, 0.4}};
    JointDistribution skewed(rows);
    // frozen: 0.5*H(0.8,0.2)*2 = 0.7219280948873623
    CHECK(conditional_entropy(skewed) == doctest::Approx(0.7219280948873623).epsilon(1e-12));
    CHECK(conditional_entropy(skewed) ==
          doctest::Approx(conditional_entropy_oracle(rows)).epsilon(1e-12));
}

TEST_CASE("mutual information") {
    JointDistribution diag({{0.25, 0, 0, 0}, {0, 0.25, 0, 0}, {0, 0, 0.25, 0}, {0, 0, 0, 0.25}});
    CHECK(mutual_information(diag) == doctest::Approx(2.0).epsilon(1e-12));

    JointDistribution indep({{0.25, 0.25}, {0.25, 0.25}});
    CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-12));

    JointDistribution skewed({{0.4, 0.1}, {0.1, 0.4}});
    // frozen brute-force Eq-6 summation; must equal 1 - 0.7219280948873623
    CHECK(mutual_information(skewed) == doctest::Approx(0.2780719051126377).epsilon(1e-12));
    CHECK(mutual_information(skewed) ==
          doctest::Approx(1.0 - conditional_entropy(skewed)).epsilon(1e-9));
}

TEST_CASE("kl divergence") {
    CHECK(kl_divergence(Distribution({0.5, 0.5}), Distribution({0.5, 0.5})) == 0.0);
    // frozen direct summation: 0.75 log2 1.5 + 0.25 log2 0.5
    CHECK(kl_divergence(Distribution({0.75, 0.25}), Distribution({0.5, 0.5})) ==
          doctest::Approx(0.18872187554086717).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(kl_divergence(Distribution({0.5, 0.5}), Distribution({1.0, 0.0})),
                         doctest::Contains("index 1"), domain_error);
    CHECK_THROWS_AS(kl_divergence(Distribution({1.0}), Distribution({0.5, 0.5})),
                    validation_error);
}

TEST_CASE("mutual information equals KL against the product of marginals") {
    JointDistribution j({{0.4, 0.1}, {0.1, 0.4}});
    const auto pa = j.row_marginal().probs();
    const auto pb = j.col_marginal().probs();
    std::vector<double> product;
    for (double a : pa) {
        for (double b : pb) product.push_back(a * b);
    }
    const double kl = kl_divergence(Distribution(j.flat(), 4), Distribution(product, 4));
    CHECK(mutual_information(j) == doctest::Approx(kl).epsilon(1e-9));
}

TEST_CASE("relative information") {
    const auto uniform = relative_information(Distribution::uniform(8));
    CHECK(uniform.entropy_bits == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(uniform.bound_bits == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(uniform.slack_bits == doctest::Approx(0.0).epsilon(1e-12));

    const auto degenerate = relative_information(Distribution({1.0, 0.0}, 2));
    CHECK(degenerate.entropy_bits == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(degenerate.bound_bits == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(degenerate.slack_bits == doctest::Approx(1.0).epsilon(1e-12));

    testgen::SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto d = testgen::random_distribution(rng);
        const auto rel = relative_information(d);
        CHECK(rel.entropy_bits == doctest::Approx(entropy(d)).epsilon(1e-12));
        CHECK(rel.slack_bits == doctest::Approx(rel.bound_bits - rel.entropy_bits).epsilon(1e-12));
        CHECK(rel.slack_bits >= 0.0);
    }
}

TEST_CASE("mutual bound") {
    CHECK(mutual_bound(4, 2.0) == 2.0);
    CHECK(mutual_bound(4, 4.0) == 0.0);
    CHECK(mutual_bound(1, 0.0) == 0.0);
    CHECK_THROWS_AS(mutual_bound(4, 1.5), domain_error);
    CHECK_THROWS_AS(mutual_bound(4, 4.5), domain_error);
    CHECK_THROWS_AS(mutual_bound(0, 0.0), domain_error);

    for (std::uint64_t n : {2ull, 5ull, 16ull, 100ull}) {
        CHECK(mutual_bound(n, entropy_bound(n)) == entropy_bound(n));
        // monotone decreasing in the joint entropy term
        double prev = mutual_bound(n, entropy_bound(n));
        for (int k = 1; k <= 10; ++k) {
            const double h = entropy_bound(n) * (1.0 + k / 10.0);
            const double mb = mutual_bound(n, h);
            CHECK(mb <= prev + 1e-12);
            prev = mb;
        }
    }
}

TEST_CASE("entropy stays within its bound; equality only for full uniform support") {
    testgen::SplitMix64 rng(23);
    for (int i = 0; i < 300; ++i) {
        const auto d = testgen::random_distribution(rng);
        const double h = entropy(d);
        const double bound = entropy_bound(d.size());
        CHECK(h >= 0.0);
        CHECK(h <= bound + 1e-9);
        const bool uniform_full =
            d.support() == d.size() &&
            std::all_of(d.probs().begin(), d.probs().end(), [&](double p) {
                return std::abs(p - 1.0 / static_cast<double>(d.size())) < 1e-12;
            });
        if (std::abs(h - bound) < 1e-12) {
            CHECK(uniform_full);
        }
        if (uniform_full) {
            CHECK(h == doctest::Approx(bound).epsilon(1e-9));
        }
    }
}

TEST_CASE("appending a zero-probability element keeps entropy, grows bound and slack") {
    testgen::SplitMix64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto d = testgen::random_distribution(rng);
        auto wider_probs = d.probs();
        wider_probs.push_back(0.0);
        const Distribution wider(wider_probs, d.size() + 1);
        CHECK(entropy(wider) == entropy(d));
        const auto rel = relative_information(d);
        const auto rel_wider = relative_information(wider);
        CHECK(rel_wider.bound_bits > rel.bound_bits);
        CHECK(rel_wider.slack_bits > rel.slack_bits - 1e-12);
        CHECK(rel_wider.slack_bits + rel_wider.entropy_bits ==
              doctest::Approx(rel_wider.bound_bits).epsilon(1e-12));
    }
}

TEST_CASE("Eq-2 and Eq-6 routes agree on random joints") {
    testgen::SplitMix64 rng(41);
    for (int i = 0; i < 300; ++i) {
        const auto j = testgen::random_joint(rng, 8);
        const double via_eq6 = mutual_information(j);
        const double via_eq2 = entropy(j.col_marginal()) - conditional_entropy(j);
        CHECK(via_eq6 == doctest::Approx(via_eq2).epsilon(1e-9));
        CHECK(via_eq6 >= 0.0);
    }
}

TEST_CASE("KL nonnegativity with equality iff p = q") {
    testgen::SplitMix64 rng(43);
    for (int i = 0; i < 300; ++i) {
        const std::size_t len = 1 + rng.next() % 12;
        const Distribution p(testgen::random_probs(rng, len, 0.0));
        const Distribution q(testgen::random_probs(rng, len, 0.0));
        const double d = kl_divergence(p, q);
        CHECK(d >= 0.0);
        bool equal = true;
        for (std::size_t k = 0; k < len; ++k) {
            if (std::abs(p.probs()[k] - q.probs()[k]) > 1e-12) equal = false;
        }
        if (d < 1e-12) CHECK(equal);
        if (equal) CHECK(d <= 1e-12);
    }
}
