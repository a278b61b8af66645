#include "adaprep/pipeline.hpp"
#include "adaprep/quality.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace adaprep;
using testing_support::default_corpus;

TEST(BaselineTest, LandscapeDownscale) {
    const auto r = baseline_preprocess(Image(2048, 1536, Channels::Gray8, std::uint8_t{200}));
    EXPECT_EQ(r.image.width(), 1024);
    EXPECT_EQ(r.image.height(), 768);
    EXPECT_EQ(r.tokens.token_count, 192);
}

TEST(BaselineTest, AlreadyAtBaselineIsIdentity) {
    std::mt19937_64 rng(61);
    const Image g = oracle::random_gray(rng, 1024, 1024);
    const auto r = baseline_preprocess(g);
    EXPECT_EQ(r.image, g);
    EXPECT_EQ(r.tokens.token_count, 256);
}

TEST(BaselineTest, SmallInputIsUpscaled) {
    const auto r = baseline_preprocess(Image(500, 500, Channels::Rgb8, std::uint8_t{10}));
    EXPECT_EQ(r.image.width(), 1024);
    EXPECT_EQ(r.image.height(), 1024);
    EXPECT_EQ(r.tokens.token_count, 256);
    EXPECT_EQ(r.image.channels(), Channels::Rgb8);
}

TEST(BaselineTest, PortraitPageIsPaddedWithWhite) {
    const auto r = baseline_preprocess(Image(1700, 2200, Channels::Gray8, std::uint8_t{0}));
    // 1700 * 1024 / 2200 = 791.3 -> 791, snapped to 832.
    EXPECT_EQ(r.placement.content, (Dims{791, 1024}));
    EXPECT_EQ(r.image.width(), 832);
    EXPECT_EQ(r.image.height(), 1024);
    EXPECT_EQ(r.placement.offset_x, 20);
    EXPECT_EQ(r.image.at(0, 500), 255);
    EXPECT_EQ(r.image.at(20, 500), 0);
    EXPECT_EQ(r.image.at(20 + 790, 500), 0);
    EXPECT_EQ(r.image.at(20 + 791, 500), 255);
    EXPECT_EQ(r.tokens.token_count, 13 * 16);
}

TEST(AdaptiveTest, BlankPageFallsBackToFullFrameLowTier) {
    const Image blank(1024, 1024, Channels::Gray8, std::uint8_t{255});
    const auto a = adaptive_preprocess(blank);
    EXPECT_EQ(a.plan.complexity.complexity, ComplexityClass::Low);
    EXPECT_FALSE(a.plan.crop_box.has_value());
    EXPECT_EQ(a.plan.target_side, 512);
    EXPECT_EQ(a.image.width(), 512);
    EXPECT_EQ(a.image.height(), 512);
    EXPECT_EQ(a.plan.predicted_tokens, 64);
    const auto b = baseline_preprocess(blank);
    EXPECT_DOUBLE_EQ(reduction(b.tokens, token_stats(a.image.width(), a.image.height(), 64)), 0.75);
}

TEST(AdaptiveTest, NeverUpscalesSmallCrops) {
    Image img(300, 200, Channels::Gray8, std::uint8_t{255});
    for (int y = 90; y < 110; ++y)
        for (int x = 100; x < 200; ++x) img.at(x, y) = (x / 3) % 2 ? 0 : 255;
    const auto a = adaptive_preprocess(img);
    ASSERT_TRUE(a.plan.crop_box.has_value());
    EXPECT_EQ(a.plan.placement.content, (Dims{a.plan.crop_box->w, a.plan.crop_box->h}));
}

TEST(AdaptiveTest, CorpusPagesFollowTheirClass) {
    for (const auto& page : default_corpus()) {
        const auto b = baseline_preprocess(page.image);
        const auto a = adaptive_preprocess(page.image);
        const double r = reduction(b.tokens, token_stats(a.image.width(), a.image.height(), 64));
        EXPECT_EQ(a.plan.complexity.complexity, page.intended) << page.filename;
        if (page.intended == ComplexityClass::High) {
            EXPECT_EQ(a.plan.target_side, 1024);
            EXPECT_LE(r, 0.15) << page.filename;
        }
        if (page.intended == ComplexityClass::Low) {
            EXPECT_GE(r, 0.55) << page.filename;
        }
        EXPECT_LE(a.plan.predicted_tokens, b.tokens.token_count) << page.filename;
    }
}

TEST(AdaptiveTest, PlanIsSelfConsistent) {
    std::mt19937_64 rng(62);
    std::vector<Image> inputs;
    for (const auto& page : default_corpus()) inputs.push_back(page.image);
    for (int i = 0; i < 20; ++i) {
        Image img(1 + static_cast<int>(rng() % 700), 1 + static_cast<int>(rng() % 700), Channels::Gray8,
                  std::uint8_t{255});
        const int x0 = static_cast<int>(rng() % img.width()), y0 = static_cast<int>(rng() % img.height());
        for (int y = y0; y < std::min(img.height(), y0 + 40); ++y)
            for (int x = x0; x < std::min(img.width(), x0 + 60); ++x) img.at(x, y) = static_cast<std::uint8_t>(rng() % 256);
        inputs.push_back(std::move(img));
    }
    for (const auto& img : inputs) {
        const auto a = adaptive_preprocess(img);
        const auto& p = a.plan;
        EXPECT_EQ(p.predicted_tokens, token_count(a.image.width(), a.image.height(), p.patch));
        EXPECT_EQ(p.output_dims(), (Dims{a.image.width(), a.image.height()}));
        EXPECT_EQ(p.target_side, select_resolution(p.complexity.complexity, ResolutionPolicy{}));
        EXPECT_LE(std::max(p.placement.content.width, p.placement.content.height), p.target_side);
        if (p.crop_box) {
            EXPECT_LE(p.crop_box->x + p.crop_box->w, img.width());
            EXPECT_LE(p.crop_box->y + p.crop_box->h, img.height());
        }
    }
}

TEST(AdaptiveTest, CollapsesToBaselineWithEqualTiersAndNoCrop) {
    PipelineConfig cfg;
    cfg.policy = {1024, 1024, 1024, std::nullopt, 64};
    cfg.crop.enabled = false;
    for (const auto& page : default_corpus()) {
        const auto b = baseline_preprocess(page.image, cfg.policy);
        const auto a = adaptive_preprocess(page.image, cfg);
        EXPECT_EQ(a.plan.output_dims(), b.placement.output);
        EXPECT_EQ(a.image, b.image) << page.filename;
        EXPECT_EQ(reduction(b.tokens, token_stats(a.image.width(), a.image.height(), 64)), 0.0);
        EXPECT_EQ(quality_score(b.image, adaptive_in_baseline_frame(a.image, a.plan, b.placement)).value, 1.0);
    }
    // Any input at least as large as the baseline side collapses too.
    std::mt19937_64 rng(63);
    for (int i = 0; i < 5; ++i) {
        const Image g = oracle::random_gray(rng, 1024 + static_cast<int>(rng() % 900), 300 + static_cast<int>(rng() % 900));
        EXPECT_EQ(adaptive_preprocess(g, cfg).image, baseline_preprocess(g, cfg.policy).image);
    }
}

TEST(AdaptiveTest, HighPathNeverCompressesHarderThanForcedLow) {
    for (const auto& page : default_corpus()) {
        const auto a = adaptive_preprocess(page.image);
        if (a.plan.complexity.complexity != ComplexityClass::High) continue;
        const auto low = adaptive_preprocess(page.image, {}, ComplexityClass::Low);
        EXPECT_EQ(low.plan.target_side, 512);
        EXPECT_GE(a.plan.predicted_tokens, low.plan.predicted_tokens) << page.filename;
    }
}

TEST(AdaptiveTest, Deterministic) {
    const auto& page = default_corpus()[3];
    const auto a = adaptive_preprocess(page.image);
    const auto b = adaptive_preprocess(page.image);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.plan.crop_box, b.plan.crop_box);
    EXPECT_EQ(a.plan.placement, b.plan.placement);
}

TEST(BaselineFrameTest, FullFrameSameSizeIsIdentity) {
    PipelineConfig cfg;
    cfg.policy = {1024, 1024, 1024, std::nullopt, 64};
    cfg.crop.enabled = false;
    std::mt19937_64 rng(64);
    const Image g = oracle::random_gray(rng, 1100, 700);
    const auto b = baseline_preprocess(g, cfg.policy);
    const auto a = adaptive_preprocess(g, cfg);
    EXPECT_EQ(adaptive_in_baseline_frame(a.image, a.plan, b.placement), b.image);
}

TEST(BaselineFrameTest, CropLandsOnItsBaselineFootprint) {
    Image page(1000, 1000, Channels::Gray8, std::uint8_t{255});
    for (int y = 400; y < 600; ++y)
        for (int x = 200; x < 800; ++x) page.at(x, y) = 0;
    const auto b = baseline_preprocess(page);
    const auto a = adaptive_preprocess(page);
    ASSERT_TRUE(a.plan.crop_box.has_value());
    const Image framed = adaptive_in_baseline_frame(a.image, a.plan, b.placement);
    ASSERT_EQ(framed.width(), b.image.width());
    ASSERT_EQ(framed.height(), b.image.height());
    // Far outside the crop is white, deep inside the block is black.
    EXPECT_EQ(framed.at(50, 50), 255);
    EXPECT_EQ(framed.at(512, 512), 0);
    EXPECT_GT(quality_score(b.image, framed).value, 0.95);
}
