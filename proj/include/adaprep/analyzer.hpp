#pragma once

// Content-aware complexity analysis: edge density, intensity entropy and a
// row-transition text proxy, fused into a score in [0, 1] and bucketed into
// Low / Medium / High.

#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace adaprep {

enum class ComplexityClass { Low, Medium, High };

constexpr std::string_view to_string(ComplexityClass c) noexcept {
    switch (c) {
    case ComplexityClass::Low: return "Low";
    case ComplexityClass::Medium: return "Medium";
    case ComplexityClass::High: return "High";
    }
    return "Low";
}

inline std::optional<ComplexityClass> parse_complexity_class(std::string_view s) {
    if (s == "Low") return ComplexityClass::Low;
    if (s == "Medium") return ComplexityClass::Medium;
    if (s == "High") return ComplexityClass::High;
    return std::nullopt;
}

struct AnalyzerConfig {
    int grad_threshold = 32;
    double weight_edge = 0.45;
    double weight_entropy = 0.45;
    double weight_text = 0.10;
    double edge_density_ref = 0.20;
    int analysis_side = 512;
    double t_low = 0.25;
    double t_high = 0.60;

    /// Checks ranges and returns a copy whose weights sum to 1.
    AnalyzerConfig validated() const {
        if (grad_threshold < 1 || grad_threshold > 255) {
            throw ConfigError("analyzer.grad_threshold must be in [1, 255]");
        }
        if (weight_edge < 0 || weight_entropy < 0 || weight_text < 0) {
            throw ConfigError("analyzer weights must be non-negative");
        }
        const double sum = weight_edge + weight_entropy + weight_text;
        if (!(sum > 0)) {
            throw ConfigError("analyzer weights must not all be zero");
        }
        if (!(edge_density_ref > 0 && edge_density_ref <= 1)) {
            throw ConfigError("analyzer.edge_density_ref must be in (0, 1]");
        }
        if (analysis_side < 1) {
            throw ConfigError("analyzer.analysis_side must be positive");
        }
        if (!(t_low > 0 && t_low < t_high && t_high < 1)) {
            throw ConfigError("analyzer thresholds must satisfy 0 < t_low < t_high < 1");
        }
        AnalyzerConfig out = *this;
        out.weight_edge /= sum;
        out.weight_entropy /= sum;
        out.weight_text /= sum;
        return out;
    }
};

struct ComplexityReport {
    double edge_density = 0;
    double entropy_bits = 0;
    double text_density = 0;
    double score = 0;
    ComplexityClass complexity = ComplexityClass::Low;
};

/// Closed Medium interval: score == t_low or score == t_high is Medium.
constexpr ComplexityClass classify(double score, double t_low, double t_high) noexcept {
    if (score < t_low) return ComplexityClass::Low;
    if (score > t_high) return ComplexityClass::High;
    return ComplexityClass::Medium;
}

inline double edge_density(const GradientMap& gm, int grad_threshold) {
    if (gm.magnitudes.empty()) {
        return 0.0;
    }
    std::size_t count = 0;
    for (const std::uint8_t m : gm.magnitudes) {
        count += m >= grad_threshold ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(gm.magnitudes.size());
}

/// Shannon entropy in bits of a 256-bin histogram, in [0, 8].
inline double entropy_bits(const Histogram& hist) {
    std::uint64_t total = 0;
    for (const auto c : hist) {
        total += c;
    }
    if (total == 0) {
        throw EmptyHistogram("entropy of an all-zero histogram");
    }
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (const auto c : hist) {
        if (c != 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log2(p);
        }
    }
    return std::clamp(h, 0.0, 8.0);
}

/// Otsu threshold: values <= the returned level form the dark class.
/// Ties resolve to the lowest level.
inline int otsu_threshold(const Histogram& hist) {
    double total = 0;
    double sum_all = 0;
    for (int i = 0; i < 256; ++i) {
        total += static_cast<double>(hist[static_cast<std::size_t>(i)]);
        sum_all += i * static_cast<double>(hist[static_cast<std::size_t>(i)]);
    }
    double weight_dark = 0;
    double sum_dark = 0;
    double best = -1;
    int level = 0;
    for (int t = 0; t < 256; ++t) {
        weight_dark += static_cast<double>(hist[static_cast<std::size_t>(t)]);
        sum_dark += t * static_cast<double>(hist[static_cast<std::size_t>(t)]);
        const double weight_light = total - weight_dark;
        if (weight_dark == 0 || weight_light == 0) {
            continue;
        }
        const double mean_dark = sum_dark / weight_dark;
        const double mean_light = (sum_all - sum_dark) / weight_light;
        const double between = weight_dark * weight_light * (mean_dark - mean_light) * (mean_dark - mean_light);
        if (between > best) {
            best = between;
            level = t;
        }
    }
    return level;
}

/// Fraction of rows whose Otsu-binarized transition count reaches
/// max(4, width / 50).
inline double text_density(const Image& gray) {
    detail::require_gray(gray, "text_density");
    const int w = gray.width();
    if (w < 2) {
        return 0.0;
    }
    const int level = otsu_threshold(histogram256(gray));
    int text_rows = 0;
    for (int y = 0; y < gray.height(); ++y) {
        const auto row = gray.row(y);
        int transitions = 0;
        bool prev = row[0] > level;
        for (int x = 1; x < w; ++x) {
            const bool cur = row[static_cast<std::size_t>(x)] > level;
            transitions += cur != prev ? 1 : 0;
            prev = cur;
        }
        if (transitions >= 4 && 50 * transitions >= w) {
            ++text_rows;
        }
    }
    return static_cast<double>(text_rows) / gray.height();
}

/// The Gray8 image the analyzer measures: long side capped at `side`
/// (never upscaled), then converted to luma.
inline Image analysis_copy(const Image& img, int side) {
    if (std::max(img.width(), img.height()) > side) {
        const Dims d = fit_long_side(img.width(), img.height(), side);
        return to_gray(resize(img, d.width, d.height));
    }
    return to_gray(img);
}

inline ComplexityReport analyze(const Image& img, const AnalyzerConfig& config = {}) {
    const AnalyzerConfig cfg = config.validated();
    const Image gray = analysis_copy(img, cfg.analysis_side);

    ComplexityReport r;
    r.edge_density = edge_density(gradient_magnitude(gray), cfg.grad_threshold);
    r.entropy_bits = entropy_bits(histogram256(gray));
    r.text_density = text_density(gray);
    const double score = cfg.weight_edge * std::min(r.edge_density / cfg.edge_density_ref, 1.0) +
                         cfg.weight_entropy * (r.entropy_bits / 8.0) + cfg.weight_text * r.text_density;
    r.score = std::clamp(score, 0.0, 1.0);
    r.complexity = classify(r.score, cfg.t_low, cfg.t_high);
    return r;
}

} // namespace adaprep
