#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delchan/errors.hpp"
#include "delchan/layers.hpp"
#include "oracle.hpp"

using namespace delchan;

namespace {

const LayeredPattern kNone2{2, {}};
const DiffList kSingle{};

Rational rat(long num, long den) { return Rational(num) / Rational(den); }

}  // namespace

TEST_CASE("weight of a string") {
    CHECK(weight_exact("0011", "0", kSingle, kNone2, 1) == rat(1, 2));
    CHECK(weight_exact("0011", "0", kSingle, kNone2, 2) == rat(1, 4));
    CHECK(weight_exact("0101", "0", kSingle, kNone2, 1) == rat(1, 4));
    CHECK(weight_exact("0101", "0", kSingle, kNone2, 2) == rat(1, 4));
    CHECK_THROWS_AS(weight_exact("010101", "0", kSingle, kNone2, 2), NonDividing);
}

TEST_CASE("weight monotone for the single-query no-deletion case") {
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        std::string z = oracle::random_binary(64, 7000 + seed);
        for (const char* b : {"0", "1"}) {
            Rational previous = weight_exact(z, b, kSingle, kNone2, 1);
            for (std::size_t ell = 2; ell <= 6; ++ell) {
                Rational current = weight_exact(z, b, kSingle, kNone2, ell);
                CHECK(current <= previous);
                CHECK(current >= 0);
                CHECK(current <= 1);
                previous = current;
            }
        }
    }
}

TEST_CASE("cumulative weight averages the image") {
    // two-string average, computed by the per-string oracle
    Rational avg = (weight_exact("0011", "0", kSingle, kNone2, 1) +
                    weight_exact("0101", "0", kSingle, kNone2, 1)) /
                   2;
    CHECK(avg == rat(3, 8));

    // repetition(2) image {0000, 0011, 1100, 1111}
    Code rep{CodeKind::repetition, 2, Alphabet::binary(), 2};
    CHECK(cumulative_weight_exact(rep, "0", kSingle, kNone2, 1) == rat(1, 2));
    CHECK(cumulative_weight_exact(rep, "0", kSingle, kNone2, 2) == rat(3, 8));
}

TEST_CASE("weight profile sentinels") {
    Code rep{CodeKind::repetition, 2, Alphabet::binary(), 2};
    EvalPolicy policy;
    WeightProfile profile = weight_profile(rep, "0", kSingle, kNone2, policy);
    CHECK(profile.top == 2);
    CHECK(profile.at(0) == 2.0);
    CHECK(profile.at(-3) == 2.0);
    CHECK(profile.at(3) == -1.0);
    CHECK(profile.at(1) == doctest::Approx(0.5));
    CHECK(profile.at(2) == doctest::Approx(0.375));
}

TEST_CASE("critical layers cross the delta grid") {
    // profile 1/2, 3/8: layer 1 is critical at delta=1/10 (3/8 < 4/10 <= 1/2)
    Code rep{CodeKind::repetition, 2, Alphabet::binary(), 2};
    auto critical = critical_layers(rep, '0', 10, 2);
    CHECK(std::find(critical.begin(), critical.end(), 1) != critical.end());
    // the sentinels make the extremes critical
    CHECK(std::find(critical.begin(), critical.end(), 0) != critical.end());
    CHECK(std::find(critical.begin(), critical.end(), 2) != critical.end());

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Code rnd{CodeKind::random_uniform, 6, Alphabet::binary(), 1, 64, seed};
        for (std::size_t inv_delta : {2, 4, 10}) {
            auto layers = critical_layers(rnd, '0', inv_delta, 2);
            CHECK(layers.size() <= inv_delta + 2);
            CHECK(std::is_sorted(layers.begin(), layers.end()));
        }
    }
}

TEST_CASE("flat profile has no interior critical layers") {
    // image {0^16, 1^16}: W_t = 1/2 at every t, so only sentinels cross
    Code flat{CodeKind::repetition, 1, Alphabet::binary(), 16};
    auto critical = critical_layers(flat, '0', 10, 2);
    CHECK(critical == std::vector<std::size_t>{0, 4});
}

TEST_CASE("significant layers: flat image stays at the window") {
    Code flat{CodeKind::repetition, 1, Alphabet::binary(), 16};
    EvalPolicy policy;
    LayerScan scan = significant_layers(flat, "0", kSingle, kNone2, 0.2, 1, 1, policy);
    CHECK(scan.found == std::vector<std::size_t>{1});
    CHECK(scan.base == 1);
    CHECK(scan.window == 1);
}

TEST_CASE("significant layer appears at the block scale") {
    // image contains 0^8 1^8 and 1^8 0^8: chunk fractions flip only when
    // chunks first span both halves, at layer 4
    Code blocks{CodeKind::repetition, 2, Alphabet::binary(), 8};
    EvalPolicy policy;
    LayerScan scan = significant_layers(blocks, "0", kSingle, kNone2, 0.2, 1, 1, policy);
    CHECK(std::find(scan.found.begin(), scan.found.end(), 4) != scan.found.end());
    CHECK(scan.found == std::vector<std::size_t>{1, 4});
}

TEST_CASE("significant layers bounded on random codes") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Code rnd{CodeKind::random_uniform, 3, Alphabet::binary(), 1, 16, 3000 + seed};
        EvalPolicy policy;
        LayerScan scan = significant_layers(rnd, "0", kSingle, kNone2, 0.9, 1, 1, policy);
        CHECK(scan.found == std::vector<std::size_t>{1});
        CHECK(static_cast<double>(scan.found.size()) <= 1 + std::pow(0.9, -3.0));
    }
}

TEST_CASE("refinement difference is nonnegative and bounded") {
    Code rnd{CodeKind::random_uniform, 4, Alphabet::binary(), 1, 64, 11};
    EvalPolicy policy;
    double diff = refinement_difference(rnd, "0", kSingle, kNone2, 1, 1, 3, policy);
    CHECK(diff >= 0.0);
    CHECK(diff <= 1.0);
    CHECK_THROWS_AS(refinement_difference(rnd, "0", kSingle, kNone2, 1, 3, 3, policy),
                    BadParams);
}

TEST_CASE("variance identity, exact") {
    Code rep{CodeKind::repetition, 2, Alphabet::binary(), 2};
    TelescopingReport report = weight_telescoping_exact(rep, "0", kSingle, kNone2, 1, 2);
    CHECK(report.mean_variance == report.weight_drop());
    CHECK(report.cw_low == rat(1, 2));
    CHECK(report.cw_high == rat(3, 8));

    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        Code rnd{CodeKind::random_uniform, 4, Alphabet::binary(), 1, 64, 4000 + seed};
        for (std::size_t lo = 1; lo <= 5; ++lo) {
            for (std::size_t hi = lo + 1; hi <= 6; ++hi) {
                TelescopingReport r =
                    weight_telescoping_exact(rnd, "0", kSingle, kNone2, lo, hi);
                CHECK(r.mean_variance == r.weight_drop());
            }
        }
    }
}

TEST_CASE("flat string telescoping is zero") {
    Code flat{CodeKind::repetition, 1, Alphabet::binary(), 16};
    TelescopingReport r = weight_telescoping_exact(flat, "0", kSingle, kNone2, 1, 3);
    CHECK(r.mean_variance == 0);
    CHECK(r.weight_drop() == 0);
}
