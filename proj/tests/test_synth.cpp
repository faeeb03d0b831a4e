#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "croprow/synth.hpp"
#include "test_util.hpp"

using namespace croprow;

namespace {

SceneSpec single_row_spec(double angle, double offset, int width) {
    SceneSpec spec;
    spec.width = spec.height = 512;
    RowSpec row;
    row.angle = RowAngle{angle};
    row.offset = offset;
    row.width = width;
    spec.rows = {row};
    return spec;
}

/// Perpendicular distance from pixel center (x, y) to the row's center line.
double line_distance(const RowSpec& row, int x, int y) {
    const double theta = row_angle_to_theta(row.angle) * 3.14159265358979323846 / 180.0;
    return std::fabs(x * std::cos(theta) + y * std::sin(theta) - row.offset);
}

} // namespace

TEST_CASE("a vertical one-pixel row paints exactly one column") {
    BinaryMask mask = render_mask(single_row_spec(0.0, 37.0, 1));
    CHECK(mask.white_count() == 512);
    for (int y = 0; y < 512; ++y) CHECK(mask.at(37, y));
}

TEST_CASE("width widens symmetrically around the center line") {
    BinaryMask mask = render_mask(single_row_spec(0.0, 100.0, 4));
    CHECK(mask.white_count() == 4 * 512);
    for (int y = 0; y < 512; ++y) {
        CHECK_FALSE(mask.at(98, y));
        CHECK(mask.at(99, y));  // offsets -1..2 for even width
        CHECK(mask.at(102, y));
        CHECK_FALSE(mask.at(103, y));
    }
}

TEST_CASE("gap intervals erase the stated fraction of the extent") {
    SceneSpec spec = single_row_spec(0.0, 200.0, 1);
    spec.rows[0].gaps = {{0.4, 0.6}};
    BinaryMask mask = render_mask(spec);
    // scanline y is erased when (y + 0.5)/512 lies in [0.4, 0.6)
    for (int y = 0; y < 512; ++y) {
        const double f = (y + 0.5) / 512.0;
        CHECK(mask.at(200, y) == !(f >= 0.4 && f < 0.6));
    }
    CHECK(mask.white_count() == 512 - 102);
}

TEST_CASE("a horizontal row walks the x axis") {
    BinaryMask mask = render_mask(single_row_spec(90.0, 64.0, 3));
    CHECK(mask.white_count() == 3 * 512);
    for (int x = 0; x < 512; ++x) {
        CHECK(mask.at(x, 63));
        CHECK(mask.at(x, 64));
        CHECK(mask.at(x, 65));
        CHECK_FALSE(mask.at(x, 61));
    }
}

TEST_CASE("diagonal rows stay within half a pixel plus half the width of the line") {
    for (double angle : {30.0, -30.0, 44.0, -67.0, 10.5}) {
        const double offset = angle >= 0 ? 150.0 : -150.0;
        SceneSpec spec = single_row_spec(angle, offset, 5);
        BinaryMask mask = render_mask(spec);
        CHECK(mask.white_count() > 0);
        for (int y = 0; y < 512; ++y)
            for (int x = 0; x < 512; ++x)
                if (mask.at(x, y)) CHECK(line_distance(spec.rows[0], x, y) <= 5.0 / 2.0 + 1.0);
    }
}

TEST_CASE("scenes compose as the union of their rows") {
    SceneSpec spec;
    spec.width = spec.height = 256;
    for (int i = 0; i < 3; ++i) {
        RowSpec row;
        row.angle = RowAngle{-20.0 + 20.0 * i};
        row.offset = row.angle.degrees < 0 ? -60.0 : 60.0 + 60.0 * i;
        row.width = 2 + i;
        spec.rows.push_back(row);
    }
    BinaryMask whole = render_gt_mask(spec);
    BinaryMask built(256, 256);
    for (const RowSpec& row : spec.rows) {
        SceneSpec solo;
        solo.width = solo.height = 256;
        solo.rows = {row};
        BinaryMask part = render_gt_mask(solo);
        for (std::size_t i = 0; i < built.bits.size(); ++i)
            built.bits[i] = built.bits[i] || part.bits[i];
    }
    CHECK(whole == built);
}

TEST_CASE("rendering is deterministic in the seed") {
    SceneSpec spec = single_row_spec(25.0, 220.0, 3);
    spec.speckle_density = 0.03;
    spec.seed = 99;
    CHECK(render_mask(spec) == render_mask(spec));

    SceneSpec other = spec;
    other.seed = 100;
    CHECK(render_mask(other) != render_mask(spec));
}

TEST_CASE("speckle lands at the configured density away from every row") {
    SceneSpec spec = single_row_spec(12.0, 250.0, 3);
    spec.speckle_density = 0.01;
    spec.seed = 4242;
    BinaryMask mask = render_mask(spec);
    BinaryMask rows_only = render_gt_mask(spec);

    std::size_t speckle = 0;
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x)
            if (mask.at(x, y) && !rows_only.at(x, y)) {
                ++speckle;
                // at least 3 px clearance from the row band
                CHECK(line_distance(spec.rows[0], x, y) >= 3.0 / 2.0 + 3.0);
            }
    const double expected = 0.01 * 512.0 * 512.0;
    CHECK(speckle > expected * 0.8);
    CHECK(speckle < expected * 1.2);
}

TEST_CASE("the ground-truth mask never contains speckle") {
    SceneSpec spec = single_row_spec(-40.0, -100.0, 2);
    spec.speckle_density = 0.05;
    spec.seed = 7;
    BinaryMask gt = render_gt_mask(spec);
    SceneSpec quiet = spec;
    quiet.speckle_density = 0.0;
    CHECK(gt == render_mask(quiet));
}

TEST_CASE("rgb rendering matches the mask pixel for pixel") {
    SceneSpec spec = single_row_spec(8.0, 300.0, 4);
    spec.speckle_density = 0.02;
    spec.seed = 11;
    BinaryMask mask = render_mask(spec);
    RgbImage rgb = render_rgb(spec, {40, 180, 60}, {120, 85, 50});
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x) {
            const bool crop = mask.at(x, y);
            CHECK(rgb.at(x, y, 0) == (crop ? 40 : 120));
            CHECK(rgb.at(x, y, 1) == (crop ? 180 : 85));
            CHECK(rgb.at(x, y, 2) == (crop ? 60 : 50));
        }
}

TEST_CASE("identical crop and soil colors are rejected") {
    SceneSpec spec = single_row_spec(0.0, 10.0, 1);
    testutil::expect_error([&] { render_rgb(spec, {9, 9, 9}, {9, 9, 9}); },
                           ErrorCode::InvalidArgument);
}

TEST_CASE("perturb_spec shifts and wraps each angle") {
    SceneSpec spec;
    spec.width = spec.height = 128;
    RowSpec a;
    a.angle = RowAngle{10.0};
    RowSpec b;
    b.angle = RowAngle{89.5};
    spec.rows = {a, b};

    SceneSpec same = perturb_spec(spec, {0.0, 0.0});
    CHECK(same.rows[0].angle.degrees == 10.0);
    CHECK(same.rows[1].angle.degrees == 89.5);

    SceneSpec moved = perturb_spec(spec, {2.0, 1.0});
    CHECK(moved.rows[0].angle.degrees == doctest::Approx(12.0));
    CHECK(moved.rows[1].angle.degrees == doctest::Approx(-89.5)); // wrapped

    testutil::expect_error([&] { perturb_spec(spec, {1.0}); }, ErrorCode::InvalidArgument);
}

TEST_CASE("scene json round-trips every field") {
    SceneSpec spec;
    spec.width = 640;
    spec.height = 480;
    spec.speckle_density = 0.015;
    spec.seed = 123456789;
    RowSpec row;
    row.angle = RowAngle{-22.5};
    row.offset = -48.25;
    row.width = 6;
    row.gaps = {{0.1, 0.2}, {0.5, 0.55}};
    spec.rows = {row};

    SceneSpec back = scene_from_json(scene_to_json(spec));
    CHECK(back.width == spec.width);
    CHECK(back.height == spec.height);
    CHECK(back.speckle_density == spec.speckle_density);
    CHECK(back.seed == spec.seed);
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0].angle.degrees == row.angle.degrees);
    CHECK(back.rows[0].offset == row.offset);
    CHECK(back.rows[0].width == row.width);
    CHECK(back.rows[0].gaps == row.gaps);
}

TEST_CASE("scene json parsing validates its input") {
    testutil::expect_error([] { scene_from_json("{nope"); }, ErrorCode::Parse);
    testutil::expect_error([] { scene_from_json("{}"); }, ErrorCode::Parse);
    testutil::expect_error([] { scene_from_json(R"({"size": [0, 32], "rows": []})"); },
                           ErrorCode::InvalidArgument);
    // overlapping gaps
    testutil::expect_error(
        [] {
            scene_from_json(
                R"({"size": [64, 64], "rows": [{"angle": 0, "offset": 10, "width": 1,
                    "gaps": [[0.1, 0.5], [0.4, 0.6]]}]})");
        },
        ErrorCode::InvalidArgument);
    // gap outside [0, 1]
    testutil::expect_error(
        [] {
            scene_from_json(
                R"({"size": [64, 64], "rows": [{"angle": 0, "offset": 10, "width": 1,
                    "gaps": [[-0.1, 0.5]]}]})");
        },
        ErrorCode::InvalidArgument);
    // speckle density out of range
    testutil::expect_error(
        [] { scene_from_json(R"({"size": [64, 64], "rows": [], "speckle_density": 0.5})"); },
        ErrorCode::InvalidArgument);
    // zero row width
    testutil::expect_error(
        [] {
            scene_from_json(
                R"({"size": [64, 64], "rows": [{"angle": 0, "offset": 10, "width": 0}]})");
        },
        ErrorCode::InvalidArgument);
}

TEST_CASE("splitmix64 reference vector") {
    // first outputs for seed 1234567 in the published reference sequence
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ull);
    CHECK(rng.next() == 3203168211198807973ull);
    SplitMix64 unit(0);
    for (int i = 0; i < 1000; ++i) {
        const double u = unit.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
