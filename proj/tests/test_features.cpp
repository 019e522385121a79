#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "support/synth_scenes.hpp"
#include "support/test_images.hpp"
#include "weather/features.hpp"
#include "weather/random.hpp"

using namespace weather;

TEST_CASE("brightness and saturation are plane means") {
    CHECK(brightness(testimg::constant_gray(4, 4, 128)) == 128.0);
    CHECK(brightness(ImageGray8(2, 1, {0, 255})) == 127.5);

    const HsvPlanes red = to_hsv(testimg::constant_rgb(4, 4, 255, 0, 0));
    CHECK(brightness(red.v) == 255.0);
    CHECK(saturation(red.s) == 255.0);

    const HsvPlanes gray = to_hsv(testimg::constant_rgb(4, 4, 77, 77, 77));
    CHECK(saturation(gray.s) == 0.0);

    // half pure red, half neutral gray
    ImageRgb8 img(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            img.at(x, y, 0) = x < 4 ? 255 : 128;
            img.at(x, y, 1) = x < 4 ? 0 : 128;
            img.at(x, y, 2) = x < 4 ? 0 : 128;
        }
    CHECK(saturation(to_hsv(img).s) == 127.5);
}

TEST_CASE("noise level and blur metric share one definition") {
    CHECK(noise_level(testimg::constant_gray(6, 6, 42)) == 0.0);
    CHECK(blur_metric(testimg::constant_gray(6, 6, 42)) == 0.0);

    RandomStream rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const ImageGray8 img = synth::random_gray(rng, 12, 9);
        CHECK(noise_level(img) == blur_metric(img));
    }
}

TEST_CASE("noise level matches the brute-force variance oracle") {
    const Kernel laplace(3, {0, 1, 0, 1, -4, 1, 0, 1, 0});

    // linear ramp: zero in the interior, small border contribution
    ImageGray8 ramp(9, 9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) ramp.at(x, y) = static_cast<std::uint8_t>(x * 25);
    const double want_ramp =
        oracle::population_variance_reference(oracle::convolve_reference(ramp, laplace).data);
    CHECK(noise_level(ramp) == doctest::Approx(want_ramp).epsilon(1e-12));
    CHECK(want_ramp > 0.0);

    // checkerboard: alternating +-4*255 stencil responses
    ImageGray8 board(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) board.at(x, y) = ((x + y) % 2 == 0) ? 0 : 255;
    const double want_board =
        oracle::population_variance_reference(oracle::convolve_reference(board, laplace).data);
    CHECK(noise_level(board) == doctest::Approx(want_board).epsilon(1e-12));
}

TEST_CASE("sobel-x statistics match the oracle") {
    CHECK(edge_strength_x(testimg::constant_gray(6, 6, 9)) == 0.0);
    CHECK(motion_blur_x(testimg::constant_gray(6, 6, 9)) == 0.0);
    CHECK(edge_strength_x(testimg::horizontal_step(8, 8, 0, 255)) == 0.0);

    const Kernel sobel(3, {-1, 0, 1, -2, 0, 2, -1, 0, 1});
    const ImageGray8 vstep = testimg::vertical_step(8, 8, 0, 255);
    const std::vector<double> ref = oracle::convolve_reference(vstep, sobel).data;
    double abs_sum = 0.0;
    for (double v : ref) abs_sum += std::abs(v);
    CHECK(edge_strength_x(vstep) == doctest::Approx(abs_sum / ref.size()).epsilon(1e-12));
    CHECK(motion_blur_x(vstep) ==
          doctest::Approx(oracle::population_variance_reference(ref)).epsilon(1e-12));
}

TEST_CASE("horizontal smoothing lowers sobel-x variance") {
    RandomStream rng(99);
    const ImageGray8 img = synth::random_gray(rng, 24, 18);

    // length-9 horizontal box blur, rounded back to bytes
    ImageGray8 blurred(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -4; k <= 4; ++k) {
                const int xx = std::clamp(x + k, 0, img.width - 1);
                acc += img.at(xx, y);
            }
            blurred.at(x, y) = static_cast<std::uint8_t>(std::lround(acc / 9.0));
        }
    CHECK(motion_blur_x(blurred) < motion_blur_x(img));
}

TEST_CASE("lbp codes: constant image saturates, spike zeroes the center") {
    const ImageGray8 flat = testimg::constant_gray(7, 7, 55);
    for (int radius : {1, 2, 3}) {
        const ImageGray8 codes = lbp_map(flat, LbpParams{radius});
        for (std::uint8_t c : codes.data) CHECK(c == 255);
        const PlaneStats s = lbp_stats(flat, radius);
        CHECK(s.mean == 255.0);
        CHECK(s.var == 0.0);
    }

    // ties (neighbor == center) set bits, so on a black background every
    // pixel but the spike itself reads 255
    ImageGray8 spike = testimg::constant_gray(5, 5, 0);
    spike.at(2, 2) = 255;
    const ImageGray8 codes = lbp_map(spike, LbpParams{1});
    CHECK(codes.width == 3);
    CHECK(codes.height == 3);
    CHECK(codes.at(1, 1) == 0);  // every neighbor below the bright center
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            if (!(x == 1 && y == 1)) CHECK(codes.at(x, y) == 255);

    const std::vector<int> ref = oracle::lbp_codes_reference(spike, 1);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(codes.data[i] == ref[i]);
}

TEST_CASE("lbp codes constant along columns away from a step") {
    const ImageGray8 img = testimg::vertical_step(10, 8, 40, 200);
    const ImageGray8 codes = lbp_map(img, LbpParams{1});
    for (int x = 0; x < codes.width; ++x) {
        for (int y = 1; y < codes.height; ++y) CHECK(codes.at(x, y) == codes.at(x, 0));
    }
    const std::vector<int> ref = oracle::lbp_codes_reference(img, 1);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(codes.data[i] == ref[i]);
}

TEST_CASE("lbp matches the reference implementation on random images") {
    RandomStream rng(13);
    for (int radius : {1, 2, 3}) {
        const ImageGray8 img = synth::random_gray(rng, 16, 16);
        const ImageGray8 codes = lbp_map(img, LbpParams{radius});
        const std::vector<int> ref = oracle::lbp_codes_reference(img, radius);
        REQUIRE(codes.data.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) CHECK(codes.data[i] == ref[i]);

        const PlaneStats s = lbp_stats(img, radius);
        std::vector<double> values(ref.begin(), ref.end());
        CHECK(s.mean == doctest::Approx(oracle::mean_reference(values)).epsilon(1e-12));
        CHECK(s.var ==
              doctest::Approx(oracle::population_variance_reference(values)).epsilon(1e-12));
        CHECK(s.mean >= 0.0);
        CHECK(s.mean <= 255.0);
        CHECK(s.var >= 0.0);
    }
}

TEST_CASE("lbp rejects undersized images") {
    CHECK_THROWS_AS(lbp_map(testimg::constant_gray(6, 6, 0), LbpParams{3}), DimensionError);
    CHECK_THROWS_AS(lbp_stats(testimg::constant_gray(4, 9, 0), 2), DimensionError);
}

TEST_CASE("edge statistics over binary maps") {
    CHECK(edge_stats(EdgeMap(4, 4)).mean == 0.0);
    CHECK(edge_stats(EdgeMap(4, 4)).var == 0.0);

    EdgeMap all(4, 4, std::vector<std::uint8_t>(16, 255));
    CHECK(edge_stats(all).mean == 255.0);
    CHECK(edge_stats(all).var == 0.0);

    // exactly 25% edges
    std::vector<std::uint8_t> quarter(16, 0);
    for (int i = 0; i < 4; ++i) quarter[static_cast<std::size_t>(i)] = 255;
    const PlaneStats s = edge_stats(EdgeMap(4, 4, quarter));
    CHECK(s.mean == 63.75);
    CHECK(s.var == 12192.1875);

    // exactly 50%: the two-code arithmetic case
    std::vector<std::uint8_t> half(16, 0);
    for (int i = 0; i < 8; ++i) half[static_cast<std::size_t>(i)] = 255;
    const PlaneStats s2 = edge_stats(EdgeMap(4, 4, half));
    CHECK(s2.mean == 127.5);
    CHECK(s2.var == 16256.25);
}

TEST_CASE("color statistics in both modes") {
    const ImageGray8 flat = testimg::constant_gray(5, 4, 100);
    const PlaneStats intensity = color_stats(flat, ColorStatMode::intensity);
    CHECK(intensity.mean == 100.0);
    CHECK(intensity.var == 0.0);

    // literal mode degenerates to pixel_count/256 for any constant plane
    const PlaneStats literal = color_stats(flat, ColorStatMode::literal);
    CHECK(literal.mean == 20.0 / 256.0);

    ImageGray8 split(10, 2);
    for (int x = 0; x < 10; ++x) {
        split.at(x, 0) = 0;
        split.at(x, 1) = 200;
    }
    const PlaneStats s = color_stats(split, ColorStatMode::intensity);
    CHECK(s.mean == 100.0);
    CHECK(s.var == 10000.0);
}

TEST_CASE("constant mid-gray image yields the closed-form vector") {
    const FeatureVector fv = extract_features(testimg::constant_rgb(16, 16, 128, 128, 128));
    const double expected[kFeatureCount] = {128, 0, 0, 0, 0, 0, 255, 0, 255, 0,
                                            255, 0, 0, 0, 128, 0, 128, 0, 128, 0};
    for (int i = 0; i < kFeatureCount; ++i) CHECK(fv[static_cast<std::size_t>(i)] == expected[i]);
}

TEST_CASE("extract_features equals per-formula oracle recomputation") {
    RandomStream rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        RandomStream img_rng = rng.derive(static_cast<std::uint64_t>(trial));
        const ImageRgb8 img = trial % 2 == 0 ? synth::clear_scene(img_rng, 32, 32)
                                             : synth::random_rgb(img_rng, 32, 32);
        const ExtractionConfig config;
        const FeatureVector got = extract_features(img, config);

        const EdgeMap edges = canny(to_grayscale(img), config.canny_low, config.canny_high);
        const FeatureVector want = oracle::extract_reference(img, edges, config.color_mode);
        for (int i = 0; i < kFeatureCount; ++i) {
            CAPTURE(i);
            CHECK(got[static_cast<std::size_t>(i)] ==
                  doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-9));
        }
        CHECK(got[2] == got[3]);
    }
}

TEST_CASE("extraction is deterministic and always finite") {
    RandomStream rng(33);
    const ImageRgb8 img = synth::random_rgb(rng, 24, 16);
    const FeatureVector a = extract_features(img);
    const FeatureVector b = extract_features(img);
    for (int i = 0; i < kFeatureCount; ++i) {
        CHECK(a[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(i)]);
        CHECK(std::isfinite(a[static_cast<std::size_t>(i)]));
    }
}

TEST_CASE("pixel permutation leaves the order-free slots untouched") {
    RandomStream rng(55);
    const ImageRgb8 img = synth::random_rgb(rng, 14, 11);

    std::vector<std::size_t> perm(img.pixel_count());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);

    ImageRgb8 shuffled(img.width, img.height);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            shuffled.data[i * 3 + static_cast<std::size_t>(c)] =
                img.data[perm[i] * 3 + static_cast<std::size_t>(c)];
        }
    }

    const FeatureVector a = extract_features(img);
    const FeatureVector b = extract_features(shuffled);
    for (std::size_t slot : {0, 1, 14, 15, 16, 17, 18, 19}) {
        CHECK(a[slot] == b[slot]);
    }
}

TEST_CASE("undersized images are rejected with the failing requirement") {
    const ImageRgb8 small = testimg::constant_rgb(6, 6, 1, 2, 3);
    try {
        extract_features(small);
        FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("7x7") != std::string::npos);
    }
}
