#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "delchan/errors.hpp"
#include "delchan/querydist.hpp"
#include "delchan/rng.hpp"
#include "oracle.hpp"

using namespace delchan;

namespace {

const LayeredPattern kNone{2, {}};

Rational rat(long num, long den) { return Rational(num) / Rational(den); }

}  // namespace

TEST_CASE("exact freq, no deletion") {
    CHECK(exact_freq("0000", DiffList{{1}}, kNone, "00") == rat(3, 4));
    CHECK(err_prob("0000", DiffList{{1}}, kNone) == rat(1, 4));

    ExactDist t = exact_freq_table("0101", DiffList{{2}}, kNone);
    CHECK(t.prob("00") == rat(1, 4));
    CHECK(t.prob("11") == rat(1, 4));
    CHECK(t.err == rat(1, 2));

    CHECK(exact_freq("0011", DiffList{}, kNone, "0") == rat(1, 2));
    CHECK(err_prob("0011", DiffList{}, kNone) == 0);
    CHECK(err_prob("01", DiffList{{3}}, kNone) == 1);
}

TEST_CASE("exact tables sum to one") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        std::string s = oracle::random_binary(8, seed);
        for (const auto& diffs : {DiffList{}, DiffList{{1}}, DiffList{{2, 3}}}) {
            for (const auto& pattern :
                 {kNone, LayeredPattern{2, {0.5}}, LayeredPattern{2, {1.0, 0.25}}}) {
                ExactDist t = exact_freq_table(s, diffs, pattern);
                CHECK(t.mass() == 1);
            }
        }
    }
}

TEST_CASE("exact freq agrees with the recursive oracle") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        std::string s = oracle::random_binary(8, 100 + seed);
        for (const auto& diffs :
             {std::vector<std::size_t>{}, {1}, {3}, {1, 2}, {2, 2}}) {
            for (const auto& pattern :
                 {LayeredPattern{2, {0.5}}, LayeredPattern{2, {1.0}},
                  LayeredPattern{2, {0.5, 0.25}}}) {
                DiffList list{diffs};
                ExactDist mine = exact_freq_table(s, list, pattern);
                oracle::Counts naive = oracle::freq_counts(s, diffs, pattern);
                Rational total(naive.total);
                CHECK(mine.err == Rational(naive.err) / total);
                for (const auto& [b, count] : naive.hits)
                    CHECK(mine.prob(b) == Rational(count) / total);
            }
        }
    }
}

TEST_CASE("enumeration cap") {
    LayeredPattern p{2, {1.0}};
    EnumerationCaps tight{10};
    CHECK_THROWS_AS(exact_freq_table("00000000", DiffList{{1}}, p, tight), CapExceeded);
}

TEST_CASE("mc freq within 4 sigma of exact") {
    const std::size_t samples = 100000;
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        std::string s = oracle::random_binary(8, 55 + seed);
        for (const auto& diffs : {DiffList{}, DiffList{{2}}, DiffList{{1, 1}}}) {
            for (const auto& pattern : {kNone, LayeredPattern{2, {0.5}}}) {
                ExactDist exact = exact_freq_table(s, diffs, pattern);
                OutputDist mc = mc_freq_table(s, diffs, Pattern{pattern}, samples,
                                              derive(seed, 0xF00), 2);
                auto band = [&](double p, double estimate) {
                    double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / samples);
                    CHECK(std::abs(estimate - p) <= 4 * sigma + 1e-9);
                    ++checked;
                };
                band(static_cast<double>(exact.err), mc.err);
                for (const auto& [b, p] : exact.probs) {
                    auto it = mc.probs.find(b);
                    band(static_cast<double>(p),
                         it == mc.probs.end() ? 0.0 : it->second);
                }
            }
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("mc output dist basics") {
    OutputDist point = mc_output_dist("0101", {1, 3}, Pattern{kNone}, 2000, 9);
    CHECK(point.probs.at("00") == doctest::Approx(1.0));
    CHECK(point.err == doctest::Approx(0.0));

    OutputDist err_mass = mc_output_dist("0101", {5}, Pattern{kNone}, 500, 9);
    CHECK(err_mass.err == doctest::Approx(1.0));

    std::string zeros(64, '0');
    OutputDist survivors = mc_output_dist(zeros, {1}, Pattern{PrefixPeriodicPattern{0.5}},
                                          100000, 3);
    CHECK(survivors.probs.at("0") >= 0.99);
}

TEST_CASE("mc output dist deterministic and worker-invariant") {
    LayeredPattern p{2, {0.5, 0.5}};
    std::string s = oracle::random_binary(16, 77);
    OutputDist one = mc_output_dist(s, {1, 5}, Pattern{p}, 20000, 5, 1);
    OutputDist four = mc_output_dist(s, {1, 5}, Pattern{p}, 20000, 5, 4);
    CHECK(one.probs == four.probs);
    CHECK(one.err == four.err);
}

TEST_CASE("exact output dist matches mc for fixed queries") {
    LayeredPattern p{2, {0.5}};
    std::string s = oracle::random_binary(8, 3);
    ExactDist exact = exact_output_dist(s, {2, 5}, p);
    CHECK(exact.mass() == 1);
    OutputDist mc = mc_output_dist(s, {2, 5}, Pattern{p}, 200000, 11, 2);
    for (const auto& [b, prob] : exact.probs) {
        double pd = static_cast<double>(prob);
        double sigma = std::sqrt(pd * (1 - pd) / 200000);
        CHECK(std::abs(mc.probs.at(b) - pd) <= 4 * sigma + 1e-9);
    }
}

TEST_CASE("tv distance is a metric") {
    OutputDist a;
    a.query_count = 2;
    a.probs = {{"00", 0.5}, {"11", 0.5}};
    OutputDist b;
    b.query_count = 2;
    b.probs = {{"00", 1.0}};
    OutputDist c;
    c.query_count = 2;
    c.probs = {{"01", 1.0}};
    CHECK(tv_distance(a, a) == doctest::Approx(0.0));
    CHECK(tv_distance(b, c) == doctest::Approx(1.0));
    CHECK(tv_distance(a, b) == doctest::Approx(0.5));
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);

    OutputDist r1;
    r1.query_count = 1;
    CHECK_THROWS_AS(tv_distance(a, r1), SupportMismatch);
}

TEST_CASE("approx gap examples") {
    ExactApproxReport same = approx_gap_exact("0000", 4, DiffList{{1}}, DiffList{{1}}, kNone);
    CHECK(same.gap == rat(1, 2));
    CHECK(same.sum_ok);

    ExactApproxReport empty = approx_gap_exact("0110", 4, DiffList{}, DiffList{}, kNone);
    CHECK(empty.gap == 0);

    // freq differences: b="01" gives |1/2 - 0| = 1/2, err terms 1/4 and 1/2
    ExactApproxReport shifted =
        approx_gap_exact("0101", 4, DiffList{{1}}, DiffList{{2}}, kNone);
    CHECK(shifted.per_b.at("01") == rat(1, 2));
    CHECK(shifted.per_b.at("00") == rat(1, 4));
    CHECK(shifted.err_a == rat(1, 4));
    CHECK(shifted.err_b == rat(1, 2));
    CHECK(shifted.gap == rat(5, 4));
    CHECK(shifted.sum_ok);
    CHECK(!approx_gap_exact("0101", 4, DiffList{{2}}, DiffList{{1}}, kNone).sum_ok);
}

TEST_CASE("gap bounded by three") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::string s = oracle::random_binary(16, 900 + seed);
        ExactApproxReport r =
            approx_gap_exact(s, 8, DiffList{{1, 2}}, DiffList{{3, 4}},
                             LayeredPattern{2, {0.5}});
        CHECK(r.gap >= 0);
        CHECK(r.gap <= 3);
    }
}

TEST_CASE("gap triangle inequality, exact") {
    LayeredPattern p{2, {0.5}};
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        std::string s = oracle::random_binary(16, 40 + seed);
        for (std::size_t da = 1; da <= 4; ++da) {
            for (std::size_t db = da; db <= 5; ++db) {
                for (std::size_t dc = db; dc <= 6; ++dc) {
                    ExactApproxReport ab =
                        approx_gap_exact(s, 8, DiffList{{da}}, DiffList{{db}}, p);
                    ExactApproxReport bc =
                        approx_gap_exact(s, 8, DiffList{{db}}, DiffList{{dc}}, p);
                    ExactApproxReport ac =
                        approx_gap_exact(s, 8, DiffList{{da}}, DiffList{{dc}}, p);
                    CHECK(ac.gap <= ab.gap + bc.gap);
                }
            }
        }
    }
}

TEST_CASE("freq over halves, boundary err bound") {
    // |freq(s) - avg(freq halves)| <= (err(h1) + err(h2)) / 2, exactly
    LayeredPattern p{2, {0.5}};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        std::string s = oracle::random_binary(16, 500 + seed);
        std::string h1 = s.substr(0, 8);
        std::string h2 = s.substr(8);
        for (const auto& diffs : {DiffList{{1}}, DiffList{{2, 1}}}) {
            ExactDist full = exact_freq_table(s, diffs, p);
            ExactDist left = exact_freq_table(h1, diffs, p);
            ExactDist right = exact_freq_table(h2, diffs, p);
            Rational bound = (left.err + right.err) / 2;
            std::set<std::string> keys;
            for (const auto& [k, _] : full.probs) keys.insert(k);
            for (const auto& [k, _] : left.probs) keys.insert(k);
            for (const auto& [k, _] : right.probs) keys.insert(k);
            for (const std::string& b : keys) {
                Rational gap = full.prob(b) - (left.prob(b) + right.prob(b)) / 2;
                CHECK(abs(gap) <= bound);
            }
        }
    }
}

TEST_CASE("difflist validation") {
    CHECK_THROWS_AS(DiffList{{0}}.validate(), BadDiffList);
    DiffList ok{{1, 5}};
    ok.validate();
    CHECK(ok.span() == 6);
    CHECK(ok.offsets() == std::vector<std::size_t>{0, 1, 6});
    CHECK(DiffList{}.query_count() == 1);
}
