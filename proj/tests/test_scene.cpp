#include <doctest.h>

#include <random>

#include "fishpipe/scene.hpp"
#include "test_support.hpp"

using namespace fishpipe;

TEST_CASE("fish_count is the annotation count") {
    CHECK(fish_count({}) == 0);
    std::vector<Annotation> three(3, Annotation{0, {0.5, 0.5, 0.1, 0.1}});
    CHECK(fish_count(three) == 3);
}

TEST_CASE("pairwise overlap of identical and disjoint boxes") {
    NormalizedBox box{0.5, 0.5, 0.2, 0.2};
    CHECK(pairwise_overlap_mean({box, box}) == doctest::Approx(1.0));
    CHECK(pairwise_overlap_mean({{0.1, 0.1, 0.1, 0.1},
                                 {0.5, 0.5, 0.1, 0.1},
                                 {0.9, 0.9, 0.1, 0.1}}) == 0.0);
    CHECK(pairwise_overlap_mean({}) == 0.0);
    CHECK(pairwise_overlap_mean({box}) == 0.0);
}

TEST_CASE("pairwise overlap of the 1/7 pair") {
    NormalizedBox a{0.25, 0.25, 0.5, 0.5};
    NormalizedBox b{0.5, 0.5, 0.5, 0.5};
    CHECK(pairwise_overlap_mean({a, b}) ==
          doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    // For two boxes both measures reduce to the single pair IoU.
    CHECK(max_overlap_mean({a, b}) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("max overlap with one overlapping pair and one isolate") {
    NormalizedBox a{0.25, 0.25, 0.5, 0.5};
    NormalizedBox b{0.5, 0.5, 0.5, 0.5};
    NormalizedBox c{0.9, 0.1, 0.05, 0.05};
    const double q = iou(a, b);
    CHECK(max_overlap_mean({a, b, c}) ==
          doctest::Approx((q + q + 0.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("both overlap measures are order and translation invariant") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<NormalizedBox> boxes;
        const int n = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            auto b = testsupport::random_box(rng);
            b.cx *= 0.5;  // keep room for translation
            b.cy *= 0.5;
            boxes.push_back(b);
        }
        auto shuffled = boxes;
        std::swap(shuffled.front(), shuffled.back());
        CHECK(pairwise_overlap_mean(shuffled) ==
              doctest::Approx(pairwise_overlap_mean(boxes)).epsilon(1e-12));
        CHECK(max_overlap_mean(shuffled) ==
              doctest::Approx(max_overlap_mean(boxes)).epsilon(1e-12));
        auto moved = boxes;
        for (auto& b : moved) {
            b.cx += 0.2;
            b.cy += 0.2;
        }
        CHECK(pairwise_overlap_mean(moved) ==
              doctest::Approx(pairwise_overlap_mean(boxes)).epsilon(1e-9));
        CHECK(max_overlap_mean(moved) ==
              doctest::Approx(max_overlap_mean(boxes)).epsilon(1e-9));
    }
}

TEST_CASE("two-box equality of the two overlap measures") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<NormalizedBox> pair{testsupport::random_box(rng),
                                        testsupport::random_box(rng)};
        CHECK(pairwise_overlap_mean(pair) ==
              doctest::Approx(max_overlap_mean(pair)).epsilon(1e-12));
    }
}

TEST_CASE("density bins partition the counts") {
    CHECK(density_bin(0) == "0");
    CHECK(density_bin(1) == "1");
    CHECK(density_bin(2) == "2-3");
    CHECK(density_bin(3) == "2-3");
    CHECK(density_bin(4) == "4-7");
    CHECK(density_bin(5) == "4-7");
    CHECK(density_bin(7) == "4-7");
    CHECK(density_bin(8) == "8+");
    CHECK(density_bin(12) == "8+");
    CHECK_THROWS_AS(density_bin(-1), std::invalid_argument);
    // Total and monotone over 0..20: no gaps, labels in bin order.
    const auto& labels = density_bin_labels();
    size_t last = 0;
    for (int c = 0; c <= 20; ++c) {
        const auto it = std::find(labels.begin(), labels.end(), density_bin(c));
        REQUIRE(it != labels.end());
        const size_t idx = static_cast<size_t>(it - labels.begin());
        CHECK(idx >= last);
        last = idx;
    }
}
