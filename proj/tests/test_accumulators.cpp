#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "varlab/varlab.hpp"

using namespace varlab;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> uniform_data(std::uint64_t n, std::optional<int> shift, std::uint64_t seed) {
    return generate({n, shift, seed});
}

double oracle_digits(double computed, std::span<const double> data) {
    return correct_digits(computed, exact_variance(data)).digits;
}

} // namespace

TEST_CASE("two_pass on small exact inputs") {
    const std::vector<double> d{1, 2, 3};
    const VarianceResult r = two_pass(d);
    CHECK(r.count == 3);
    CHECK(r.mean == 2.0);
    CHECK(r.sum_sq_dev == 2.0);
    CHECK(r.sample_variance == 1.0);
    CHECK_FALSE(r.negative_clamped);

    const std::vector<double> c{5, 5, 5, 5};
    CHECK(two_pass(c).sample_variance == 0.0);
}

TEST_CASE("two_pass error cases") {
    CHECK_THROWS_AS(two_pass(std::vector<double>{}), EmptyInputError);
    CHECK_THROWS_AS(two_pass(std::vector<double>{7.0}), InsufficientDataError);
    const std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(two_pass(bad), NonFiniteValueError);
    const std::vector<double> inf{1.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(two_pass(inf), NonFiniteValueError);
}

TEST_CASE("two_pass matches the exact oracle on an unshifted sample") {
    const auto data = uniform_data(10000, std::nullopt, 42);
    const VarianceResult r = two_pass(data);
    CHECK(oracle_digits(r.sample_variance, data) >= 12.0);
    // population value is 1/12; the sample estimate should land nearby
    CHECK_THAT(r.sample_variance, WithinRel(1.0 / 12.0, 0.05));
}

TEST_CASE("textbook_one_pass partial terms and small exact inputs") {
    MomentState state(0.0);
    for (double x : {1.0, 2.0, 3.0}) state.add(x);
    const auto [s1, s2] = state.cancellation_terms();
    CHECK(s1 == 14.0);
    CHECK(s2 == 12.0);
    CHECK(state.finalize(false).sample_variance == 1.0);

    const std::vector<double> d{2, 4};
    const VarianceResult r = textbook_one_pass(d, false);
    CHECK(r.sum_sq_dev == 2.0);
    CHECK(r.sample_variance == 2.0);
}

TEST_CASE("textbook_one_pass collapses at shift 1e8") {
    // At this conditioning the subtraction loses every significant digit;
    // depending on the seed the raw result may even come out negative.
    const auto data = uniform_data(10000, 8, 1);
    const VarianceResult raw = textbook_one_pass(data, false);
    CHECK(oracle_digits(raw.sample_variance, data) == 0.0);

    if (raw.sum_sq_dev < 0.0) {
        const VarianceResult clamped = textbook_one_pass(data, true);
        CHECK(clamped.sample_variance == 0.0);
        CHECK(clamped.negative_clamped);
        CHECK_FALSE(raw.negative_clamped);
    }
}

TEST_CASE("textbook_one_pass clamp flag on a constructed negative") {
    // Two near-identical large values force S1 - S2 below zero.
    bool found = false;
    for (std::uint64_t seed = 1; seed <= 64 && !found; ++seed) {
        const auto data = uniform_data(10000, 8, seed);
        const VarianceResult raw = textbook_one_pass(data, false);
        if (raw.sum_sq_dev >= 0.0) continue;
        found = true;
        const VarianceResult clamped = textbook_one_pass(data, true);
        CHECK(clamped.negative_clamped);
        CHECK(clamped.sum_sq_dev == 0.0);
        CHECK(clamped.sample_variance == 0.0);
    }
    CHECK(found);
}

TEST_CASE("shifted_one_pass with the exact mean as shift") {
    const std::vector<double> d{1, 2, 3};
    const VarianceResult r = shifted_one_pass(d, ShiftPolicy::explicit_shift(2.0));
    CHECK(r.sum_sq_dev == 2.0);
    CHECK(r.sample_variance == 1.0);
    CHECK(r.mean == 2.0);
}

TEST_CASE("shifted_one_pass conditions a large offset away") {
    const std::vector<double> d{1e8 + 0.1, 1e8 + 0.2, 1e8 + 0.3};
    const VarianceResult shifted = shifted_one_pass(d, ShiftPolicy::first_element());
    CHECK(oracle_digits(shifted.sample_variance, d) >= 10.0);
    CHECK_THAT(shifted.sample_variance, WithinRel(0.01, 1e-6));

    // shift 0 degrades to the textbook behaviour
    const VarianceResult unshifted = shifted_one_pass(d, ShiftPolicy::explicit_shift(0.0));
    CHECK(oracle_digits(unshifted.sample_variance, d) <
          oracle_digits(shifted.sample_variance, d));
}

TEST_CASE("shift policies resolve as documented") {
    const std::vector<double> d{10, 20, 30, 40};
    CHECK(ShiftPolicy::first_element().resolve(d) == 10.0);
    CHECK(ShiftPolicy::explicit_shift(7.5).resolve(d) == 7.5);
    CHECK(ShiftPolicy::prefix_mean(2).resolve(d) == 15.0);
    CHECK(ShiftPolicy::prefix_mean(100).resolve(d) == 25.0); // prefix capped at N
}

TEST_CASE("pair_state_from_value") {
    const PairState a = pair_state_from_value(3.5);
    CHECK(a.count == 1);
    CHECK(a.total == 3.5);
    CHECK(a.s == 0.0);
    CHECK(pair_state_from_value(0.0).total == 0.0);
    CHECK(pair_state_from_value(-2.0).total == -2.0);
    CHECK_THROWS_AS(pair_state_from_value(std::numeric_limits<double>::quiet_NaN()),
                    NonFiniteValueError);
}

TEST_CASE("pair_merge combines segment states") {
    const PairState merged = pair_merge({2, 3.0, 0.5}, {2, 7.0, 0.5});
    CHECK(merged.count == 4);
    CHECK(merged.total == 10.0);
    CHECK(merged.s == 5.0); // direct two-pass S of [1,2,3,4]

    const PairState two_points = pair_merge({1, 2.0, 0.0}, {1, 4.0, 0.0});
    CHECK(two_points.count == 2);
    CHECK(two_points.total == 6.0);
    CHECK(two_points.s == 2.0);
}

TEST_CASE("pair_merge treats the empty state as identity") {
    const PairState x{5, 12.5, 3.25};
    const PairState empty{};
    const PairState l = pair_merge(empty, x);
    CHECK(l.count == x.count);
    CHECK(l.total == x.total);
    CHECK(l.s == x.s);
    const PairState r = pair_merge(x, empty);
    CHECK(r.count == x.count);
    CHECK(r.total == x.total);
    CHECK(r.s == x.s);
}

TEST_CASE("updating_yc_push recurrence") {
    PairState st;
    st = updating_yc_push(st, 2.0);
    CHECK(st.count == 1);
    CHECK(st.total == 2.0);
    CHECK(st.s == 0.0);
    st = updating_yc_push(st, 4.0);
    CHECK(st.count == 2);
    CHECK(st.total == 6.0);
    CHECK(st.s == 2.0);

    const std::vector<double> d{1, 2, 3};
    const VarianceResult r = updating_yc(d);
    CHECK(r.sum_sq_dev == 2.0);
    CHECK(r.sample_variance == 1.0);
}

TEST_CASE("updating_wwh recurrence") {
    WelfordState st;
    st.push(2.0);
    CHECK(st.count == 1);
    CHECK(st.mean == 2.0);
    CHECK(st.s == 0.0);
    st.push(4.0);
    CHECK(st.count == 2);
    CHECK(st.mean == 3.0);
    CHECK(st.s == 2.0);

    const std::vector<double> d{1, 2, 3};
    WelfordState w;
    for (double x : d) w.push(x);
    CHECK(w.count == 3);
    CHECK(w.mean == 2.0);
    CHECK(w.s == 2.0);
}

TEST_CASE("pairwise stream with unit leaves builds the balanced tree") {
    PairwiseStream stream(1);
    for (double x : {1.0, 2.0, 3.0, 4.0}) stream.push(x);
    const PairState acc = stream.collapse();
    CHECK(acc.count == 4);
    CHECK(acc.total == 10.0);
    CHECK(acc.s == 5.0);
    CHECK(stream.finalize().sample_variance == 5.0 / 3.0);
}

TEST_CASE("pairwise stream finalize guards") {
    PairwiseStream empty(4);
    CHECK_THROWS_AS(empty.finalize(), EmptyInputError);
    PairwiseStream one(4);
    one.push(7.0);
    CHECK_THROWS_AS(one.finalize(), InsufficientDataError);
}

TEST_CASE("pairwise stream merges sealed blocks") {
    // base_block 2 over [1,2,3,4] seals (2,T=3,S=0.5) and (2,T=7,S=0.5),
    // whose merge is the whole-data state.
    PairwiseStream stream(2);
    for (double x : {1.0, 2.0, 3.0, 4.0}) stream.push(x);
    CHECK(stream.count() == 4);
    CHECK(stream.finalize().sample_variance == 5.0 / 3.0);
}

TEST_CASE("pairwise stream agrees with two_pass at the default leaf size") {
    const auto data = uniform_data(5000, 2, 11);
    const double pw = pairwise_updating(data).sum_sq_dev;
    const double tp = two_pass(data).sum_sq_dev;
    CHECK_THAT(pw, WithinRel(tp, 1e-9));
}

TEST_CASE("group_summarize") {
    const std::vector<double> a{1, 2};
    const GroupSummary ga = group_summarize(a);
    CHECK(ga.n == 2);
    CHECK(ga.mean == 1.5);
    CHECK(ga.variance == 0.5);

    const std::vector<double> b{3, 4};
    const GroupSummary gb = group_summarize(b);
    CHECK(gb.mean == 3.5);
    CHECK(gb.variance == 0.5);

    const std::vector<double> single{9};
    const GroupSummary gs = group_summarize(single);
    CHECK(gs.n == 1);
    CHECK(gs.mean == 9.0);
    CHECK(gs.variance == 0.0);

    CHECK_THROWS_AS(group_summarize(std::vector<double>{}), EmptyInputError);
    CHECK_THROWS_AS(group_summarize(a, AlgorithmId::TotalVariance), DomainError);
}

TEST_CASE("total_variance combines group summaries") {
    const std::vector<GroupSummary> groups{{2, 1.5, 0.5}, {2, 3.5, 0.5}};
    const VarianceResult r = total_variance(groups);
    CHECK(r.count == 4);
    CHECK(r.mean == 2.5);
    CHECK(r.sum_sq_dev == 5.0);
    CHECK(r.sample_variance == 5.0 / 3.0);
}

TEST_CASE("total_variance single group returns the group variance") {
    const std::vector<GroupSummary> one{{7, 3.25, 0.8125}};
    const VarianceResult r = total_variance(one);
    CHECK(r.count == 7);
    CHECK(r.mean == 3.25);
    // cross term is zero; only (n-1)v / (n-1) remains, exact here
    CHECK_THAT(r.sample_variance, WithinRel(0.8125, 1e-15));
}

TEST_CASE("total_variance over singleton groups equals two_pass") {
    const auto data = uniform_data(500, 3, 5);
    std::vector<GroupSummary> groups;
    for (double x : data) groups.push_back(group_summarize(std::span(&x, 1)));
    const VarianceResult tv = total_variance(groups);
    const VarianceResult tp = two_pass(data);
    CHECK(tv.mean == tp.mean);
    CHECK_THAT(tv.sum_sq_dev, WithinRel(tp.sum_sq_dev, 1e-12));
}

TEST_CASE("total_variance input guards") {
    CHECK_THROWS_AS(total_variance(std::vector<GroupSummary>{}), EmptyInputError);
    const std::vector<GroupSummary> single_point{{1, 2.0, 0.0}};
    CHECK_THROWS_AS(total_variance(single_point), InsufficientDataError);
    const std::vector<GroupSummary> negative{{3, 1.0, -0.5}, {2, 2.0, 0.1}};
    CHECK_THROWS_AS(total_variance(negative), NegativeVarianceError);
    const std::vector<GroupSummary> zero_count{{0, 0.0, 0.0}, {2, 2.0, 0.1}};
    CHECK_THROWS_AS(total_variance(zero_count), DomainError);
}

TEST_CASE("compensated_add single step") {
    const auto [sum, carry] = compensated_add(0.0, 0.0, 1.5);
    CHECK(sum == 1.5);
    CHECK(carry == 0.0);
}

TEST_CASE("compensated summation rescues what the naive sum drops") {
    // With 1e16 in the accumulator, a following 1.0 vanishes in the naive
    // sum; the compensation carry keeps it. (When a value much larger than
    // the running sum arrives the step itself rounds and the carry cannot
    // see it, so the big value goes first here.)
    const std::vector<double> seq{1e16, 1.0, 1.0, -1e16};
    CompensatedSum naive(false);
    CompensatedSum kahan(true);
    for (double x : seq) {
        naive.add(x);
        kahan.add(x);
    }
    CHECK(naive.value() == 0.0);
    CHECK(kahan.value() == 2.0);
}

TEST_CASE("compensation carry stays zero on exact inputs") {
    CompensatedSum kahan(true);
    for (double x : {1.0, 2.0, 3.0, 4.0, 5.0}) kahan.add(x);
    CHECK(kahan.value() == 15.0);
    CHECK(kahan.carry() == 0.0);

    CompensatedSum off(false);
    off.add(0.1);
    off.add(0.2);
    CHECK(off.carry() == 0.0);
}

TEST_CASE("moment state merge requires matching configuration") {
    MomentState a(0.0), b(1.0);
    a.add(1.0);
    b.add(1.0);
    CHECK_THROWS_AS(a.merge(b), DomainError);

    MomentState c(0.0), d(0.0);
    c.add(1.0);
    c.add(2.0);
    d.add(3.0);
    c.merge(d);
    CHECK(c.count() == 3);
    CHECK(c.sum() == 6.0);
    CHECK(c.sum_sq() == 14.0);
}

// --- property-style checks -------------------------------------------------

TEST_CASE("every algorithm stays within a finite relative error of the oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const std::uint64_t n = 2 + rng() % 999;
        const int shift_pick = static_cast<int>(rng() % 6); // 0 = unshifted
        const std::optional<int> shift =
            shift_pick == 0 ? std::nullopt : std::optional<int>(shift_pick - 1);
        const std::uint64_t seed = rng();
        const auto data = uniform_data(n, shift, seed);
        const ExactRational oracle_s = exact_sum_sq_dev(data);
        for (AlgorithmId id : kAllAlgorithms) {
            RunOptions opts;
            opts.group_size = std::min<std::size_t>(10, data.size());
            const VarianceResult r = run_algorithm(data, id, opts);
            const DigitScore score = correct_digits(r.sum_sq_dev, oracle_s);
            CHECK(std::isfinite(score.relative_error));
            if (id == AlgorithmId::TwoPass) CHECK(score.relative_error < 1e-10);
        }
    }
}

TEST_CASE("merged segment states agree with the batch result") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t n = 100 + rng() % 9900;
        const int shift = static_cast<int>(rng() % 5);
        const std::uint64_t seed = rng();
        const auto data = uniform_data(n, shift, seed);
        const std::size_t cut = 1 + rng() % (data.size() - 1);
        const std::span<const double> all(data);

        PairwiseStream left, right;
        for (double x : all.subspan(0, cut)) left.push(x);
        for (double x : all.subspan(cut)) right.push(x);
        const PairState merged = pair_merge(left.collapse(), right.collapse());

        const double batch = two_pass(data).sum_sq_dev;
        CHECK_THAT(merged.s, WithinRel(batch, 1e-6));
        CHECK(merged.count == static_cast<std::int64_t>(n));
    }
}

TEST_CASE("segment S never goes negative") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t n = 2 + rng() % 500;
        const int shift = static_cast<int>(rng() % 13);
        const std::uint64_t seed = rng();
        const auto data = uniform_data(n, shift, seed);
        PairState yc;
        WelfordState w;
        PairwiseStream stream(1 + rng() % 64);
        for (double x : data) {
            yc = updating_yc_push(yc, x);
            w.push(x);
            stream.push(x);
            CHECK(yc.s >= 0.0);
            CHECK(w.s >= 0.0);
        }
        CHECK(stream.collapse().s >= 0.0);
    }
}

namespace {

// Small-integer datasets whose every intermediate is exactly representable:
// the S each algorithm computes is identical for shifted and unshifted data.
void check_translation_invariance(const std::vector<double>& base, double shift) {
    std::vector<double> shifted;
    for (double x : base) shifted.push_back(x + shift);
    RunOptions opts;
    opts.shift_policy = ShiftPolicy::first_element();
    for (AlgorithmId id : kAllAlgorithms) {
        const double s0 = run_algorithm(base, id, opts).sum_sq_dev;
        const double s1 = run_algorithm(shifted, id, opts).sum_sq_dev;
        INFO(algorithm_name(id) << " shift " << shift);
        CHECK(s0 == s1);
    }
}

} // namespace

TEST_CASE("translation by an exact integer leaves S bit-identical") {
    std::mt19937_64 rng(31337);
    const double shifts[] = {1.0, 10.0, 4096.0, 1048576.0};
    for (double shift : shifts) {
        check_translation_invariance({1, 2, 3}, shift);
        check_translation_invariance({1, 2, 3, 4}, shift);
        check_translation_invariance({6, 6, 6, 6, 6, 6}, shift);
        for (int trial = 0; trial < 5; ++trial) {
            const double a = static_cast<double>(rng() % 1024);
            const double b = static_cast<double>(rng() % 1024);
            check_translation_invariance({a, b}, shift);
        }
    }
}

TEST_CASE("identical input and configuration give bit-identical results") {
    const auto data = uniform_data(2000, 7, 555);
    for (AlgorithmId id : kAllAlgorithms) {
        const VarianceResult a = run_algorithm(data, id, {});
        const VarianceResult b = run_algorithm(data, id, {});
        CHECK(a.mean == b.mean);
        CHECK(a.sum_sq_dev == b.sum_sq_dev);
        CHECK(a.sample_variance == b.sample_variance);
    }
}
