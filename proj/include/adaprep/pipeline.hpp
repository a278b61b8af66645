#pragma once

// The two end-to-end preprocessing paths. Baseline: fixed long side, then
// snap-pad to the patch grid. Adaptive: analyze, pick a tier, crop to content,
// downscale (never upscale) to the tier, then snap-pad.

#include "adaprep/analyzer.hpp"
#include "adaprep/cropper.hpp"
#include "adaprep/image.hpp"
#include "adaprep/policy.hpp"
#include "adaprep/tokens.hpp"

#include <algorithm>
#include <optional>

namespace adaprep {

struct PipelineConfig {
    AnalyzerConfig analyzer;
    ResolutionPolicy policy;
    CropConfig crop;

    PipelineConfig validated() const {
        PipelineConfig out = *this;
        out.analyzer = analyzer.validated();
        policy.validate();
        crop.validate();
        return out;
    }
};

/// Where the resized content sits inside the snap-padded output.
struct Placement {
    Dims content;   // resized content, before padding
    Dims output;    // after padding to the patch grid
    int offset_x = 0;
    int offset_y = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

inline Placement place_on_grid(Dims content, int patch) {
    const Dims out = snap_dims(content.width, content.height, patch);
    return {content, out, (out.width - content.width) / 2, (out.height - content.height) / 2};
}

/// Pads with white so the content lands at placement.offset_{x,y}.
inline Image pad_white(const Image& img, const Placement& p) {
    if (p.output.width == img.width() && p.output.height == img.height()) {
        return img;
    }
    Image out(p.output.width, p.output.height, img.channels(), std::uint8_t{255});
    const std::size_t nc = static_cast<std::size_t>(img.channel_count());
    for (int y = 0; y < img.height(); ++y) {
        const auto src = img.row(y);
        std::copy(src.begin(), src.end(), out.row(p.offset_y + y).begin() + static_cast<std::ptrdiff_t>(p.offset_x * nc));
    }
    return out;
}

struct BaselineResult {
    Image image;
    TokenStats tokens;
    Placement placement;
};

inline BaselineResult baseline_preprocess(const Image& img, const ResolutionPolicy& policy = {}) {
    policy.validate();
    const Dims content = fit_long_side(img.width(), img.height(), policy.baseline_side());
    const Placement placement = place_on_grid(content, policy.patch);
    Image out = pad_white(resize(img, content.width, content.height), placement);
    return {std::move(out), token_stats(placement.output.width, placement.output.height, policy.patch), placement};
}

struct PreprocessPlan {
    ComplexityReport complexity;
    std::optional<CropBox> crop_box;  // nullopt means the full frame was kept
    int target_side = 0;
    Dims source;
    Placement placement;
    int patch = 0;
    std::int64_t predicted_tokens = 0;

    Dims output_dims() const noexcept { return placement.output; }
};

struct AdaptiveResult {
    Image image;
    PreprocessPlan plan;
};

/// `forced` replaces the analyzer's class when choosing the tier; the plan
/// still records the measured report.
inline AdaptiveResult adaptive_preprocess(const Image& img, const PipelineConfig& config = {},
                                          std::optional<ComplexityClass> forced = std::nullopt) {
    const PipelineConfig cfg = config.validated();
    PreprocessPlan plan;
    plan.source = {img.width(), img.height()};
    plan.patch = cfg.policy.patch;
    plan.complexity = analyze(img, cfg.analyzer);
    plan.target_side = select_resolution(forced.value_or(plan.complexity.complexity), cfg.policy);

    std::optional<Image> cropped;
    if (cfg.crop.enabled) {
        plan.crop_box = content_bbox(content_mask(to_gray(img), cfg.crop), cfg.crop);
        if (plan.crop_box && plan.crop_box->area() < static_cast<long long>(img.pixel_count())) {
            cropped = crop(img, *plan.crop_box);
        }
    }
    const Image& region = cropped ? *cropped : img;

    Dims content{region.width(), region.height()};
    if (std::max(content.width, content.height) > plan.target_side) {
        content = fit_long_side(content.width, content.height, plan.target_side);
    }
    plan.placement = place_on_grid(content, plan.patch);
    plan.predicted_tokens = token_count(plan.placement.output.width, plan.placement.output.height, plan.patch);

    Image out = pad_white(resize(region, content.width, content.height), plan.placement);
    return {std::move(out), std::move(plan)};
}

/// Renders the adaptive output back into the baseline output's frame: the
/// content is resized onto the footprint its crop box occupies in the
/// baseline image and everything the crop discarded is white. Gray8 result
/// with the baseline output's dimensions.
inline Image adaptive_in_baseline_frame(const Image& adaptive_out, const PreprocessPlan& plan,
                                        const Placement& baseline) {
    const Image gray = to_gray(adaptive_out);
    const Placement& ap = plan.placement;
    const Image content = crop(gray, {ap.offset_x, ap.offset_y, ap.content.width, ap.content.height});

    const CropBox box = plan.crop_box.value_or(CropBox{0, 0, plan.source.width, plan.source.height});
    const double sx = static_cast<double>(baseline.content.width) / plan.source.width;
    const double sy = static_cast<double>(baseline.content.height) / plan.source.height;
    auto edge = [](int v, double s, int limit) { return std::clamp(static_cast<int>(std::lround(v * s)), 0, limit); };
    const int x0 = edge(box.x, sx, baseline.content.width - 1);
    const int y0 = edge(box.y, sy, baseline.content.height - 1);
    const int x1 = std::max(x0 + 1, edge(box.x + box.w, sx, baseline.content.width));
    const int y1 = std::max(y0 + 1, edge(box.y + box.h, sy, baseline.content.height));

    const Image footprint = resize(content, x1 - x0, y1 - y0);
    Image out(baseline.output.width, baseline.output.height, Channels::Gray8, std::uint8_t{255});
    for (int y = 0; y < footprint.height(); ++y) {
        const auto src = footprint.row(y);
        std::copy(src.begin(), src.end(), out.row(baseline.offset_y + y0 + y).begin() + baseline.offset_x + x0);
    }
    return out;
}

} // namespace adaprep
