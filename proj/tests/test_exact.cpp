#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "varlab/varlab.hpp"

using namespace varlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("doubles convert to rationals exactly") {
    CHECK(ExactRational::from_double(0.5) == ExactRational(1, 2));
    CHECK(ExactRational::from_double(-0.25) == ExactRational(-1, 4));
    CHECK(ExactRational::from_double(3.0) == ExactRational(3));
    // 0.1 is not 1/10 in binary
    CHECK(ExactRational::from_double(0.1) != ExactRational(1, 10));
    CHECK_THROWS_AS(ExactRational::from_double(std::numeric_limits<double>::infinity()),
                    NonFiniteValueError);
}

TEST_CASE("rational arithmetic and conversion back to double") {
    const ExactRational third(1, 3);
    CHECK_THAT((third + third + third).to_double(), WithinAbs(1.0, 0.0));
    CHECK((ExactRational(1, 2) * ExactRational(2)).to_double() == 1.0);
    CHECK(ExactRational(1, 3).to_double() == 1.0 / 3.0);
    CHECK(ExactRational(-7, 4).to_double() == -1.75);
    CHECK(ExactRational().to_double() == 0.0);
    // magnitudes beyond double range saturate instead of overflowing
    ExactRational big(1);
    for (int i = 0; i < 40; ++i) big *= ExactRational(1000000000);
    CHECK(std::isinf(big.to_double()));
    CHECK((ExactRational(1) / big).to_double() == 0.0);
}

TEST_CASE("decimal rendering") {
    CHECK(ExactRational(1).to_decimal(10) == "1.000000000e+00");
    CHECK(ExactRational(1, 12).to_decimal() == "8.33333333333333333333333333333e-02");
    CHECK(ExactRational(2, 3).to_decimal(10) == "6.666666667e-01");
    CHECK(ExactRational(-5, 4).to_decimal(5) == "-1.2500e+00");
    CHECK(ExactRational(999, 10).to_decimal(2) == "1.0e+02"); // carry bumps the exponent
    CHECK(ExactRational().to_decimal() == "0");
    CHECK(ExactRational(1, 1000000).to_decimal(3) == "1.00e-06");
}

TEST_CASE("exact variance of small inputs") {
    const std::vector<double> d{1, 2, 3};
    CHECK(exact_variance(d) == ExactRational(1));
    CHECK(exact_sum_sq_dev(d) == ExactRational(2));

    const std::vector<double> same{0.7, 0.7};
    CHECK(exact_variance(same).is_zero());

    CHECK_THROWS_AS(exact_variance(std::vector<double>{}), EmptyInputError);
    CHECK_THROWS_AS(exact_variance(std::vector<double>{1.0}), InsufficientDataError);
}

TEST_CASE("exact variance of decimal-looking values is near but not at 1/100") {
    const std::vector<double> d{0.1, 0.2, 0.3};
    const ExactRational v = exact_variance(d);
    CHECK(v != ExactRational(1, 100));
    CHECK_THAT(v.to_double(), WithinRel(0.01, 1e-15));
    // the independent two-pass rational route lands on the same value
    const ExactRational s2 = exact_sum_sq_dev_two_pass(d);
    CHECK(v == s2 / ExactRational(2));
}

TEST_CASE("the two rational evaluation orders agree exactly") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 12; ++trial) {
        const std::uint64_t n = 2 + rng() % 999;
        const int shift = static_cast<int>(rng() % 9);
        const std::uint64_t seed = rng();
        const auto data = generate({n, shift, seed});
        CHECK(exact_sum_sq_dev(data) == exact_sum_sq_dev_two_pass(data));
    }
}

TEST_CASE("exact pair merge mirrors the floating recurrence") {
    const auto data = generate({64, 4, 9});
    const std::span<const double> all(data);
    const ExactPairState left = exact_pair_batch(all.subspan(0, 20));
    const ExactPairState right = exact_pair_batch(all.subspan(20));
    const ExactPairState merged = exact_pair_merge(left, right);
    CHECK(merged.count == 64);
    CHECK(merged.s == exact_sum_sq_dev(data));

    const ExactPairState empty{};
    CHECK(exact_pair_merge(empty, left).s == left.s);
    CHECK(exact_pair_merge(left, empty).count == left.count);
}

TEST_CASE("exact pair merge is commutative and associative") {
    const auto data = generate({30, 2, 123});
    const std::span<const double> all(data);
    const ExactPairState a = exact_pair_batch(all.subspan(0, 7));
    const ExactPairState b = exact_pair_batch(all.subspan(7, 11));
    const ExactPairState c = exact_pair_batch(all.subspan(18));
    CHECK(exact_pair_merge(a, b).s == exact_pair_merge(b, a).s);
    CHECK(exact_pair_merge(exact_pair_merge(a, b), c).s ==
          exact_pair_merge(a, exact_pair_merge(b, c)).s);
}

TEST_CASE("exact grouped decomposition equals the direct variance") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 8; ++trial) {
        const std::uint64_t n = 2 + rng() % 200;
        const std::uint64_t seed = rng();
        const auto data = generate({n, 6, seed});
        const std::span<const double> all(data);
        std::vector<ExactGroupSummary> groups;
        std::size_t begin = 0;
        while (begin < data.size()) {
            const std::size_t len = std::min<std::size_t>(1 + rng() % 9, data.size() - begin);
            groups.push_back(exact_group_summarize(all.subspan(begin, len)));
            begin += len;
        }
        CHECK(exact_total_variance(groups) == exact_variance(data));
    }
}

TEST_CASE("pairwise ingestion order is irrelevant in exact arithmetic") {
    std::mt19937_64 rng(1234);
    std::vector<double> data = generate({40, 3, 77});
    const ExactRational reference = exact_sum_sq_dev(data);
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
        std::shuffle(data.begin(), data.end(), rng);
        ExactPairState acc;
        for (double x : data) acc = exact_pair_merge(acc, exact_pair_from_value(x));
        CHECK(acc.s == reference);
    }
}
