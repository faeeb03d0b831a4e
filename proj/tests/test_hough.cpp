#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "croprow/hough.hpp"
#include "croprow/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace croprow;
using testutil::expect_error;

namespace {

void check_matches_oracle(const BinaryMask& mask, double theta_res, double rho_res) {
    HoughAccumulator acc = hough_transform(mask, theta_res, rho_res);
    oracle::HoughGrid want = oracle::hough(mask, theta_res, rho_res);
    REQUIRE(acc.theta_bins == want.theta_bins);
    REQUIRE(acc.rho_half_bins == want.rho_half_bins);
    CHECK(acc.votes == want.votes);
}

} // namespace

TEST_CASE("a vertical line votes its full height into one bin") {
    BinaryMask mask(64, 100);
    for (int y = 0; y < 100; ++y) mask.set(40, y, true);
    HoughAccumulator acc = hough_transform(mask, 0.5, 1.0);
    CHECK(acc.theta_bins == 360);
    CHECK(acc.at(0, acc.rho_half_bins + 40) == 100);
    CHECK(acc.theta_of(0) == 0.0);
    CHECK(acc.rho_of(acc.rho_half_bins + 40) == 40.0);
    CHECK(acc.total_votes() == 100 * 360);
}

TEST_CASE("a horizontal line votes at theta 90") {
    BinaryMask mask(80, 60);
    for (int x = 0; x < 80; ++x) mask.set(x, 25, true);
    HoughAccumulator acc = hough_transform(mask, 0.5, 1.0);
    const int t90 = 180; // 90 / 0.5
    CHECK(acc.at(t90, acc.rho_half_bins + 25) == 80);
}

TEST_CASE("the main diagonal votes at theta 135, rho 0") {
    BinaryMask mask(50, 50);
    for (int i = 0; i < 50; ++i) mask.set(i, i, true);
    HoughAccumulator acc = hough_transform(mask, 1.0, 1.0);
    CHECK(acc.at(135, acc.rho_half_bins) == 50);
    LineRT line{0.0, 135.0, 50};
    CHECK(angle_from_vertical(line).degrees == doctest::Approx(-45.0));
}

TEST_CASE("every white pixel casts one vote per theta bin") {
    SplitMix64 rng(31);
    for (double theta_res : {0.5, 1.0, 4.0}) {
        BinaryMask mask = testutil::random_mask(rng, 31, 17, 0.3);
        HoughAccumulator acc = hough_transform(mask, theta_res, 1.0);
        CHECK(acc.total_votes() ==
              static_cast<long>(mask.white_count()) * acc.theta_bins);
    }
}

TEST_CASE("accumulation matches the direct per-pixel oracle") {
    SplitMix64 rng(32);
    check_matches_oracle(testutil::random_mask(rng, 24, 18, 0.35), 0.5, 1.0);
    check_matches_oracle(testutil::random_mask(rng, 18, 24, 0.5), 1.0, 1.0);
    check_matches_oracle(testutil::random_mask(rng, 30, 30, 0.2), 2.0, 2.0);
    check_matches_oracle(testutil::random_mask(rng, 9, 9, 0.6), 90.0, 0.5);
    check_matches_oracle(BinaryMask(7, 7), 0.5, 1.0); // empty mask: all zeros
}

TEST_CASE("hough rejects invalid resolutions") {
    BinaryMask mask(8, 8);
    expect_error([&] { hough_transform(mask, 0.7, 1.0); }, ErrorCode::InvalidArgument);
    expect_error([&] { hough_transform(mask, 0.0, 1.0); }, ErrorCode::InvalidArgument);
    expect_error([&] { hough_transform(mask, -1.0, 1.0); }, ErrorCode::InvalidArgument);
    expect_error([&] { hough_transform(mask, 0.5, 0.0); }, ErrorCode::InvalidArgument);
}

TEST_CASE("accumulators add bin-wise and reject mismatched geometry") {
    SplitMix64 rng(33);
    BinaryMask a = testutil::random_mask(rng, 20, 20, 0.3);
    BinaryMask b(20, 20);
    BinaryMask both = a;
    // b gets the complement's pixels only, so a and b are disjoint
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
            if (!a.at(x, y) && rng.next_unit() < 0.3) {
                b.set(x, y, true);
                both.set(x, y, true);
            }
    HoughAccumulator sum = hough_transform(a, 1.0, 1.0);
    sum.add(hough_transform(b, 1.0, 1.0));
    CHECK(sum.votes == hough_transform(both, 1.0, 1.0).votes);

    HoughAccumulator other = hough_transform(BinaryMask(5, 5), 1.0, 1.0);
    expect_error([&] { sum.add(other); }, ErrorCode::InvalidArgument);
}

TEST_CASE("find_peaks agrees with the reference scan") {
    SplitMix64 rng(34);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 16 + static_cast<int>(rng.next() % 32);
        const int h = 16 + static_cast<int>(rng.next() % 32);
        BinaryMask mask = testutil::random_mask(rng, w, h, 0.05 + 0.3 * rng.next_unit());
        const double theta_res = (trial % 2) ? 1.0 : 0.5;
        HoughAccumulator acc = hough_transform(mask, theta_res, 1.0);
        oracle::HoughGrid grid = oracle::hough(mask, theta_res, 1.0);
        const long threshold = 1 + static_cast<long>(rng.next() % 12);
        const NmsRadius nms{static_cast<int>(rng.next() % 4), static_cast<int>(rng.next() % 4)};
        std::vector<LineRT> got = find_peaks(acc, threshold, nms);
        std::vector<LineRT> want =
            oracle::find_peaks(grid, theta_res, 1.0, threshold, nms.theta_bins, nms.rho_bins);
        CAPTURE(trial);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].theta == want[i].theta);
            CHECK(got[i].rho == want[i].rho);
            CHECK(got[i].votes == want[i].votes);
        }
    }
}

TEST_CASE("plateau ties go to the lexicographically first bin") {
    // Two identical vertical lines one rho apart produce equal columns of
    // votes at theta 0; with an nms window spanning both, only the first
    // survives.
    BinaryMask mask(32, 32);
    for (int y = 0; y < 32; ++y) {
        mask.set(10, y, true);
        mask.set(11, y, true);
    }
    HoughAccumulator acc = hough_transform(mask, 1.0, 1.0);
    CHECK(acc.at(0, acc.rho_half_bins + 10) == 32);
    CHECK(acc.at(0, acc.rho_half_bins + 11) == 32);
    std::vector<LineRT> peaks = find_peaks(acc, 32, NmsRadius{0, 2});
    REQUIRE(!peaks.empty());
    CHECK(peaks.front().theta == 0.0);
    CHECK(peaks.front().rho == 10.0);
    for (const LineRT& p : peaks) CHECK((p.theta != 0.0 || p.rho != 11.0));
}

TEST_CASE("peaks come out votes-descending with lexicographic tie-break") {
    BinaryMask mask(64, 64);
    for (int y = 0; y < 40; ++y) mask.set(5, y, true);  // 40 votes
    for (int x = 0; x < 64; ++x) mask.set(x, 50, true); // 64 votes
    HoughAccumulator acc = hough_transform(mask, 1.0, 1.0);
    std::vector<LineRT> peaks = find_peaks(acc, 30, NmsRadius{2, 2});
    REQUIRE(peaks.size() >= 2);
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        const bool ordered = peaks[i - 1].votes > peaks[i].votes ||
                             (peaks[i - 1].votes == peaks[i].votes &&
                              (peaks[i - 1].theta < peaks[i].theta ||
                               (peaks[i - 1].theta == peaks[i].theta &&
                                peaks[i - 1].rho < peaks[i].rho)));
        CHECK(ordered);
    }
    CHECK(peaks.front().votes >= 60); // the horizontal line dominates
}

TEST_CASE("nms radius zero keeps every bin at or above the threshold") {
    SplitMix64 rng(35);
    BinaryMask mask = testutil::random_mask(rng, 20, 20, 0.3);
    HoughAccumulator acc = hough_transform(mask, 2.0, 1.0);
    std::vector<LineRT> peaks = find_peaks(acc, 5, NmsRadius{0, 0});
    std::size_t count = 0;
    for (long v : acc.votes)
        if (v >= 5) ++count;
    CHECK(peaks.size() == count);
}

TEST_CASE("find_peaks rejects a non-positive threshold") {
    HoughAccumulator acc = hough_transform(BinaryMask(4, 4), 1.0, 1.0);
    expect_error([&] { find_peaks(acc, 0, NmsRadius{2, 2}); }, ErrorCode::InvalidArgument);
}

TEST_CASE("angle_from_vertical maps theta onto (-90, 90]") {
    auto angle = [](double theta) {
        return angle_from_vertical(LineRT{0.0, theta, 1}).degrees;
    };
    CHECK(angle(0.0) == 0.0);
    CHECK(angle(45.0) == 45.0);
    CHECK(angle(90.0) == 90.0);
    CHECK(angle(90.5) == doctest::Approx(-89.5));
    CHECK(angle(135.0) == doctest::Approx(-45.0));
    CHECK(angle(179.5) == doctest::Approx(-0.5));
}
