#include <doctest.h>

#include <random>

#include "fishpipe/yolo.hpp"
#include "test_support.hpp"

using namespace fishpipe;

TEST_CASE("parse_yolo_label_file reads well-formed lines") {
    const auto r = parse_yolo_label_file("0 0.5 0.5 0.2 0.1\n", 640, 480);
    CHECK(r.malformed.empty());
    REQUIRE(r.annotations.size() == 1);
    CHECK(r.annotations[0].class_id == 0);
    // Boxes round-trip through corner clamping, so compare per field.
    const NormalizedBox& b = r.annotations[0].box;
    CHECK(b.cx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.cy == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.w == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(b.h == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("empty label file means background-only") {
    const auto r = parse_yolo_label_file("", 640, 480);
    CHECK(r.annotations.empty());
    CHECK(r.malformed.empty());
}

TEST_CASE("short lines are reported, not fatal") {
    const auto r = parse_yolo_label_file("0 0.5 0.5\n", 640, 480);
    CHECK(r.annotations.empty());
    REQUIRE(r.malformed.size() == 1);
    CHECK(r.malformed[0].line_number == 1);
}

TEST_CASE("valid lines are salvaged around malformed ones") {
    const auto r = parse_yolo_label_file(
        "0 0.5 0.5 0.2 0.1\njunk line\n1 0.3 0.3 0.1 0.1\n", 640, 480);
    CHECK(r.annotations.size() == 2);
    REQUIRE(r.malformed.size() == 1);
    CHECK(r.malformed[0].line_number == 2);
}

TEST_CASE("serialize_yolo writes six decimal places") {
    const std::string out = serialize_yolo({{0, {0.5, 0.5, 0.2, 0.1}}});
    CHECK(out == "0 0.500000 0.500000 0.200000 0.100000\n");
    CHECK(serialize_yolo({}).empty());
}

TEST_CASE("parse/serialize round-trip within 1e-6 per coordinate") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Annotation> anns;
        const int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            anns.push_back({0, testsupport::random_box(rng)});
        const auto back =
            parse_yolo_label_file(serialize_yolo(anns), 640, 480).annotations;
        REQUIRE(back.size() == anns.size());
        for (size_t i = 0; i < anns.size(); ++i) {
            CHECK(back[i].box.cx == doctest::Approx(anns[i].box.cx).epsilon(1e-6));
            CHECK(back[i].box.cy == doctest::Approx(anns[i].box.cy).epsilon(1e-6));
            CHECK(back[i].box.w == doctest::Approx(anns[i].box.w).epsilon(1e-6));
            CHECK(back[i].box.h == doctest::Approx(anns[i].box.h).epsilon(1e-6));
        }
    }
}

TEST_CASE("remap_to_single_class zeroes ids, preserves geometry and count") {
    std::vector<Annotation> anns{{3, {0.5, 0.5, 0.1, 0.1}},
                                 {7, {0.2, 0.2, 0.1, 0.1}},
                                 {0, {0.8, 0.8, 0.1, 0.1}}};
    const auto remapped = remap_to_single_class(anns);
    REQUIRE(remapped.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(remapped[i].class_id == 0);
        CHECK(remapped[i].box == anns[i].box);
    }
    CHECK(remap_to_single_class({}).empty());
}

TEST_CASE("parse_yolo_predictions reads the sixth confidence field") {
    const auto r = parse_yolo_predictions("0 0.5 0.5 0.2 0.1 0.93\n0 0.1 0.1 0.05 0.05\n");
    REQUIRE(r.detections.size() == 1);
    CHECK(r.detections[0].confidence == doctest::Approx(0.93));
    REQUIRE(r.malformed.size() == 1);
    CHECK(r.malformed[0].line_number == 2);
}
