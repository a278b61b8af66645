#pragma once

// Structural similarity over non-overlapping 8x8 uniform windows, with a
// mean-absolute-difference fallback for images too small to window.

#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

namespace adaprep {

enum class QualityMethod { Ssim, FallbackMad };

constexpr std::string_view to_string(QualityMethod m) noexcept {
    return m == QualityMethod::Ssim ? "Ssim" : "FallbackMad";
}

struct QualityScore {
    double value = 0;
    QualityMethod method = QualityMethod::Ssim;
};

inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
inline constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);

/// Raw SSIM in [-1, 1]: mean over full 8x8 windows (partial edge windows are
/// dropped), population statistics.
inline double ssim(const Image& a, const Image& b) {
    detail::require_gray(a, "ssim");
    detail::require_gray(b, "ssim");
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionMismatch(std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                                std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
    if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
        throw TooSmall("SSIM needs both sides >= 8");
    }

    constexpr double n = kSsimWindow * kSsimWindow;
    const int wx = a.width() / kSsimWindow;
    const int wy = a.height() / kSsimWindow;
    double total = 0.0;
    for (int by = 0; by < wy; ++by) {
        for (int bx = 0; bx < wx; ++bx) {
            std::int64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int y = by * kSsimWindow; y < (by + 1) * kSsimWindow; ++y) {
                const std::uint8_t* ra = a.row(y).data() + bx * kSsimWindow;
                const std::uint8_t* rb = b.row(y).data() + bx * kSsimWindow;
                for (int x = 0; x < kSsimWindow; ++x) {
                    const int va = ra[x];
                    const int vb = rb[x];
                    sa += va;
                    sb += vb;
                    saa += va * va;
                    sbb += vb * vb;
                    sab += va * vb;
                }
            }
            // Integer moments keep var/cov exact up to the final division.
            const double mu_a = static_cast<double>(sa) / n;
            const double mu_b = static_cast<double>(sb) / n;
            const double var_a = static_cast<double>(n * saa - sa * sa) / (n * n);
            const double var_b = static_cast<double>(n * sbb - sb * sb) / (n * n);
            const double cov = static_cast<double>(n * sab - sa * sb) / (n * n);
            const double num = (2 * mu_a * mu_b + kSsimC1) * (2 * cov + kSsimC2);
            const double den = (mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2);
            total += num / den;
        }
    }
    return total / (static_cast<double>(wx) * wy);
}

/// Similarity of the adaptive output to the baseline output, judged in the
/// baseline frame: the adaptive image is bilinearly resized to baseline dims.
inline QualityScore quality_score(const Image& baseline_img, const Image& adaptive_img) {
    const Image base = to_gray(baseline_img);
    Image adapt = to_gray(adaptive_img);
    if (adapt.width() != base.width() || adapt.height() != base.height()) {
        adapt = resize(adapt, base.width(), base.height());
    }
    if (base.width() >= kSsimWindow && base.height() >= kSsimWindow) {
        return {std::clamp(ssim(base, adapt), 0.0, 1.0), QualityMethod::Ssim};
    }
    std::uint64_t diff = 0;
    const auto pa = base.pixels();
    const auto pb = adapt.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        diff += static_cast<std::uint64_t>(std::abs(static_cast<int>(pa[i]) - static_cast<int>(pb[i])));
    }
    const double mad = static_cast<double>(diff) / static_cast<double>(pa.size());
    return {1.0 - mad / 255.0, QualityMethod::FallbackMad};
}

} // namespace adaprep
