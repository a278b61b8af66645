#include "adaprep/analyzer.hpp"
#include "adaprep/corpus.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace adaprep;

namespace {

Image vertical_stripes(int w, int h, int period) {
    Image img(w, h, Channels::Gray8);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y) = (x / period) % 2 ? 255 : 0;
    return img;
}

} // namespace

TEST(EdgeDensityTest, Examples) {
    GradientMap zero{10, 10, std::vector<std::uint8_t>(100, 0)};
    EXPECT_EQ(edge_density(zero, 32), 0.0);
    GradientMap full{10, 10, std::vector<std::uint8_t>(100, 255)};
    EXPECT_EQ(edge_density(full, 32), 1.0);

    std::mt19937_64 rng(21);
    GradientMap gm{10, 10, std::vector<std::uint8_t>(100, 0)};
    std::vector<int> idx(100);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < 100; ++i) gm.magnitudes[idx[i]] = i < 23 ? 32 + rng() % 224 : rng() % 32;
    int brute = 0;
    for (auto m : gm.magnitudes) brute += m >= 32;
    ASSERT_EQ(brute, 23);
    EXPECT_DOUBLE_EQ(edge_density(gm, 32), 0.23);
}

TEST(EntropyTest, Examples) {
    Histogram h{};
    h[40] = 17;
    EXPECT_EQ(entropy_bits(h), 0.0);
    h[41] = 17;
    EXPECT_DOUBLE_EQ(entropy_bits(h), 1.0);
    Histogram u{};
    u.fill(5);
    EXPECT_DOUBLE_EQ(entropy_bits(u), 8.0);
}

TEST(EntropyTest, EmptyHistogramThrows) {
    EXPECT_THROW(entropy_bits(Histogram{}), EmptyHistogram);
}

TEST(EntropyTest, MatchesNaturalLogOracle) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const Image g = oracle::random_gray(rng, 1 + static_cast<int>(rng() % 64), 1 + static_cast<int>(rng() % 64));
        const double e = entropy_bits(histogram256(g));
        EXPECT_NEAR(e, oracle::entropy(oracle::histogram(g)), 1e-12);
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 8.0);
    }
}

TEST(OtsuTest, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        Image g(1 + static_cast<int>(rng() % 24), 1 + static_cast<int>(rng() % 24), Channels::Gray8);
        // A few distinct levels so ties and empty classes actually occur.
        const int levels = 1 + static_cast<int>(rng() % 5);
        std::vector<int> palette(static_cast<std::size_t>(levels));
        for (auto& p : palette) p = static_cast<int>(rng() % 256);
        for (auto& v : g.pixels()) v = static_cast<std::uint8_t>(palette[rng() % palette.size()]);
        EXPECT_EQ(otsu_threshold(histogram256(g)), oracle::otsu(g));
    }
}

TEST(TextDensityTest, Examples) {
    EXPECT_EQ(text_density(Image(40, 10, Channels::Gray8, std::uint8_t{128})), 0.0);

    const Image stripes = vertical_stripes(64, 16, 4);
    EXPECT_EQ(text_density(stripes), 1.0);
    EXPECT_EQ(text_density(stripes), oracle::text_density(stripes));

    Image half = vertical_stripes(64, 16, 4);
    for (int y = 8; y < 16; ++y)
        for (int x = 0; x < 64; ++x) half.at(x, y) = 255;
    EXPECT_EQ(text_density(half), 0.5);
    EXPECT_EQ(text_density(half), oracle::text_density(half));
}

TEST(TextDensityTest, MatchesOracleOnRandomImages) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        const Image g = oracle::random_gray(rng, 2 + static_cast<int>(rng() % 300), 1 + static_cast<int>(rng() % 20));
        EXPECT_DOUBLE_EQ(text_density(g), oracle::text_density(g));
    }
}

TEST(ClassifyTest, BoundariesAreMedium) {
    EXPECT_EQ(classify(0.25, 0.25, 0.60), ComplexityClass::Medium);
    EXPECT_EQ(classify(0.60, 0.25, 0.60), ComplexityClass::Medium);
    EXPECT_EQ(classify(std::nextafter(0.25, 0.0), 0.25, 0.60), ComplexityClass::Low);
    EXPECT_EQ(classify(std::nextafter(0.60, 1.0), 0.25, 0.60), ComplexityClass::High);
    EXPECT_EQ(classify(0.0, 0.25, 0.60), ComplexityClass::Low);
    EXPECT_EQ(classify(1.0, 0.25, 0.60), ComplexityClass::High);
}

TEST(AnalyzerConfigTest, WeightsNormalizeAndBadValuesThrow) {
    AnalyzerConfig c;
    c.weight_edge = 2;
    c.weight_entropy = 1;
    c.weight_text = 1;
    const auto v = c.validated();
    EXPECT_DOUBLE_EQ(v.weight_edge + v.weight_entropy + v.weight_text, 1.0);
    EXPECT_DOUBLE_EQ(v.weight_edge, 0.5);

    AnalyzerConfig bad;
    bad.t_low = 0.7;
    EXPECT_THROW(bad.validated(), ConfigError);
    bad = {};
    bad.weight_text = -1;
    EXPECT_THROW(bad.validated(), ConfigError);
    bad = {};
    bad.grad_threshold = 0;
    EXPECT_THROW(bad.validated(), ConfigError);
}

TEST(AnalyzeTest, ConstantWhiteIsFloor) {
    const auto r = analyze(Image(1024, 1024, Channels::Gray8, std::uint8_t{255}));
    EXPECT_EQ(r.edge_density, 0.0);
    EXPECT_EQ(r.entropy_bits, 0.0);
    EXPECT_EQ(r.text_density, 0.0);
    EXPECT_EQ(r.score, 0.0);
    EXPECT_EQ(r.complexity, ComplexityClass::Low);
}

TEST(AnalyzeTest, OnePixelImageIsLow) {
    const auto r = analyze(Image(1, 1, Channels::Rgb8, std::uint8_t{40}));
    EXPECT_EQ(r.score, 0.0);
    EXPECT_EQ(r.complexity, ComplexityClass::Low);
}

TEST(AnalyzeTest, ScoreIsHandFusionOfBruteForceSignals) {
    for (const auto& page : testing_support::default_corpus()) {
        const auto r = analyze(page.image);
        const Image g = analysis_copy(page.image, 512);
        ASSERT_LE(std::max(g.width(), g.height()), 512);
        int edges = 0;
        for (int y = 0; y < g.height(); ++y)
            for (int x = 0; x < g.width(); ++x) edges += oracle::sobel(g, x, y) >= 32;
        const double ed = static_cast<double>(edges) / static_cast<double>(g.pixel_count());
        const double h = oracle::entropy(oracle::histogram(g));
        const double td = oracle::text_density(g);
        const double score = 0.45 * std::min(ed / 0.2, 1.0) + 0.45 * h / 8 + 0.10 * td;
        EXPECT_DOUBLE_EQ(r.edge_density, ed);
        EXPECT_NEAR(r.entropy_bits, h, 1e-12);
        EXPECT_DOUBLE_EQ(r.text_density, td);
        EXPECT_NEAR(r.score, score, 1e-12) << page.filename;
        if (page.intended == ComplexityClass::High) {
            EXPECT_GT(score, 0.6) << page.filename;
        }
        if (page.intended == ComplexityClass::Low) {
            EXPECT_LT(score, 0.25) << page.filename;
        }
    }
}

TEST(AnalyzeTest, ScoreAlwaysInUnitInterval) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        Image img(1 + static_cast<int>(rng() % 90), 1 + static_cast<int>(rng() % 90),
                  rng() % 2 ? Channels::Rgb8 : Channels::Gray8);
        const int mode = static_cast<int>(rng() % 3);
        for (auto& v : img.pixels()) v = mode == 0 ? rng() & 0xFF : (mode == 1 ? (rng() % 2) * 255 : 77);
        const auto r = analyze(img);
        EXPECT_GE(r.score, 0.0);
        EXPECT_LE(r.score, 1.0);
        EXPECT_GE(r.edge_density, 0.0);
        EXPECT_LE(r.edge_density, 1.0);
        EXPECT_GE(r.text_density, 0.0);
        EXPECT_LE(r.text_density, 1.0);
        EXPECT_EQ(r.complexity, classify(r.score, 0.25, 0.60));
    }
}

// Tallest run of all-white rows, as {first row, length}.
static std::pair<int, int> widest_blank_band(const Image& g) {
    std::pair<int, int> best{0, 0};
    int start = 0;
    for (int y = 0; y <= g.height(); ++y) {
        bool blank = y < g.height();
        for (int x = 0; blank && x < g.width(); ++x) blank = g.at(x, y) == 255;
        if (blank) continue;
        if (y - start > best.second) best = {start, y - start};
        start = y + 1;
    }
    return best;
}

TEST(AnalyzeTest, AddingStripeBlockNeverLowersEdgeOrTextSignals) {
    int probed = 0;
    for (const auto& page : testing_support::default_corpus()) {
        const auto [y0, len] = widest_blank_band(page.image);
        const int h = std::min(page.image.height() / 10, len - 16);
        if (h < 40) continue;
        Image more = page.image;
        stripe_block(more, {page.image.width() / 8, y0 + (len - h) / 2, page.image.width() * 3 / 4, h},
                     page.seed ^ 0x5eed);
        const auto before = analyze(page.image);
        const auto after = analyze(more);
        EXPECT_GE(after.edge_density, before.edge_density) << page.filename;
        EXPECT_GE(after.text_density, before.text_density) << page.filename;
        ++probed;
    }
    EXPECT_GE(probed, 20);
}

TEST(AnalyzeTest, ClassIsStableUnderTwoTimesUpscale) {
    int agree = 0, total = 0;
    for (const auto& page : testing_support::default_corpus()) {
        const auto base = analyze(page.image).complexity;
        const auto big = analyze(resize(page.image, page.image.width() * 2, page.image.height() * 2)).complexity;
        agree += base == big;
        ++total;
    }
    EXPECT_GE(agree * 10, total * 9) << agree << "/" << total;
}
