#pragma once

// Content-aware cropping: background-distance/gradient content mask, padded
// bounding box with a minimum-area floor, and sub-rectangle extraction.

#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace adaprep {

struct CropConfig {
    int grad_threshold = 32;
    int bg_delta = 24;
    double margin_frac = 0.02;
    double min_area_frac = 0.10;
    bool enabled = true;

    const CropConfig& validate() const {
        if (grad_threshold < 1 || grad_threshold > 255) {
            throw ConfigError("crop.grad_threshold must be in [1, 255]");
        }
        if (bg_delta < 0 || bg_delta > 255) {
            throw ConfigError("crop.bg_delta must be in [0, 255]");
        }
        if (!(margin_frac >= 0 && margin_frac <= 0.2)) {
            throw ConfigError("crop.margin_frac must be in [0, 0.2]");
        }
        if (!(min_area_frac > 0 && min_area_frac <= 1)) {
            throw ConfigError("crop.min_area_frac must be in (0, 1]");
        }
        return *this;
    }
};

struct CropBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long long area() const noexcept { return static_cast<long long>(w) * h; }
    bool contains(int px, int py) const noexcept { return px >= x && px < x + w && py >= y && py < y + h; }
    friend bool operator==(const CropBox&, const CropBox&) = default;
};

struct ContentMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1, row-major

    bool at(int x, int y) const noexcept { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Mode of the 1-px border ring; ties go to the darker value.
inline int border_background(const Image& gray) {
    detail::require_gray(gray, "border_background");
    Histogram ring{};
    const int w = gray.width();
    const int h = gray.height();
    for (int x = 0; x < w; ++x) {
        ++ring[gray.at(x, 0)];
        if (h > 1) ++ring[gray.at(x, h - 1)];
    }
    for (int y = 1; y + 1 < h; ++y) {
        ++ring[gray.at(0, y)];
        if (w > 1) ++ring[gray.at(w - 1, y)];
    }
    return static_cast<int>(std::max_element(ring.begin(), ring.end()) - ring.begin());
}

/// Pixel is content iff |luma - background| >= bg_delta or its Sobel
/// magnitude >= grad_threshold.
inline ContentMask content_mask(const Image& gray, const CropConfig& cfg = {}) {
    detail::require_gray(gray, "content_mask");
    const int bg = border_background(gray);
    const int cutoff = detail::sobel_square_cutoff(cfg.grad_threshold);
    const int delta_sq = cfg.bg_delta * cfg.bg_delta;
    const int w = gray.width();
    const int h = gray.height();
    ContentMask mask{w, h, std::vector<std::uint8_t>(gray.pixel_count())};
    const auto px = gray.pixels();
    auto test = [&](const std::uint8_t* up, const std::uint8_t* mid, const std::uint8_t* dn, int x, int l, int r) {
        const int gx = (up[r] + 2 * mid[r] + dn[r]) - (up[l] + 2 * mid[l] + dn[l]);
        const int gy = (dn[l] + 2 * dn[x] + dn[r]) - (up[l] + 2 * up[x] + up[r]);
        const int d = mid[x] - bg;
        // |d| >= bg_delta  <=>  d^2 >= bg_delta^2; squared forms stay branch-free.
        return static_cast<std::uint8_t>((d * d >= delta_sq) | (gx * gx + gy * gy >= cutoff));
    };
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up = px.data() + static_cast<std::size_t>(std::max(y - 1, 0)) * w;
        const std::uint8_t* mid = px.data() + static_cast<std::size_t>(y) * w;
        const std::uint8_t* dn = px.data() + static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
        std::uint8_t* out = mask.bits.data() + static_cast<std::size_t>(y) * w;
        out[0] = test(up, mid, dn, 0, 0, std::min(1, w - 1));
        for (int x = 1; x < w - 1; ++x) {
            out[x] = test(up, mid, dn, x, x - 1, x + 1);
        }
        if (w > 1) {
            out[w - 1] = test(up, mid, dn, w - 1, w - 2, w - 1);
        }
    }
    return mask;
}

/// Tightest box around all content, padded by margin_frac of each dimension,
/// then grown around its centre to at least ceil(min_area_frac * image area).
/// Returns nullopt when the mask is empty.
inline std::optional<CropBox> content_bbox(const ContentMask& mask, const CropConfig& cfg = {}) {
    const int W = mask.width;
    const int H = mask.height;
    int x0 = W, y0 = H, x1 = -1, y1 = -1;
    for (int y = 0; y < H; ++y) {
        const std::uint8_t* row = mask.bits.data() + static_cast<std::size_t>(y) * W;
        const auto* first = std::find(row, row + W, std::uint8_t{1});
        if (first == row + W) {
            continue;
        }
        const auto last = std::find(std::make_reverse_iterator(row + W), std::make_reverse_iterator(row),
                                     std::uint8_t{1});
        x0 = std::min(x0, static_cast<int>(first - row));
        x1 = std::max(x1, static_cast<int>(last.base() - row) - 1);
        y0 = std::min(y0, y);
        y1 = y;
    }
    if (x1 < 0) {
        return std::nullopt;
    }

    const int mx = static_cast<int>(std::lround(cfg.margin_frac * W));
    const int my = static_cast<int>(std::lround(cfg.margin_frac * H));
    x0 = std::max(0, x0 - mx);
    y0 = std::max(0, y0 - my);
    x1 = std::min(W - 1, x1 + mx);
    y1 = std::min(H - 1, y1 + my);
    CropBox box{x0, y0, x1 - x0 + 1, y1 - y0 + 1};

    const long long floor_area =
        static_cast<long long>(std::ceil(cfg.min_area_frac * static_cast<double>(W) * H - 1e-9));
    if (box.area() < floor_area) {
        // Smallest area reaching the floor (exactly the floor when it factors
        // within the frame), closest to the box's aspect ratio among those.
        // nw = W always fits since floor_area <= W * H.
        const double aspect = std::log(static_cast<double>(box.w) / box.h);
        int nw = W, nh = H;
        long long best_excess = std::numeric_limits<long long>::max();
        double best_skew = 0;
        for (int cw = box.w; cw <= W; ++cw) {
            const int ch = std::max(box.h, static_cast<int>((floor_area + cw - 1) / cw));
            if (ch > H) continue;
            const long long excess = static_cast<long long>(cw) * ch - floor_area;
            const double skew = std::abs(std::log(static_cast<double>(cw) / ch) - aspect);
            if (excess < best_excess || (excess == best_excess && skew < best_skew)) {
                best_excess = excess;
                best_skew = skew;
                nw = cw;
                nh = ch;
            }
        }
        const double cx = box.x + box.w / 2.0;
        const double cy = box.y + box.h / 2.0;
        const int nx = std::clamp(static_cast<int>(std::lround(cx - nw / 2.0)), 0, W - nw);
        const int ny = std::clamp(static_cast<int>(std::lround(cy - nh / 2.0)), 0, H - nh);
        box = {nx, ny, nw, nh};
    }
    return box;
}

inline Image crop(const Image& img, const CropBox& box) {
    if (box.x < 0 || box.y < 0 || box.w < 1 || box.h < 1 || box.x + box.w > img.width() ||
        box.y + box.h > img.height()) {
        throw OutOfBounds("crop box (" + std::to_string(box.x) + "," + std::to_string(box.y) + "," +
                          std::to_string(box.w) + "," + std::to_string(box.h) + ") exceeds " +
                          std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
    Image out(box.w, box.h, img.channels());
    const std::size_t nc = static_cast<std::size_t>(img.channel_count());
    for (int y = 0; y < box.h; ++y) {
        const auto src = img.row(box.y + y).subspan(static_cast<std::size_t>(box.x) * nc, out.row_stride());
        std::copy(src.begin(), src.end(), out.row(y).begin());
    }
    return out;
}

} // namespace adaprep
