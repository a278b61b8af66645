#pragma once

// Raster primitives: the Image value type, grayscale conversion, bilinear
// resizing, Sobel gradient magnitude and 256-bin histograms. Everything here
// is a pure function over immutable inputs.

#include "adaprep/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace adaprep {

enum class Channels : std::uint8_t { Gray8 = 1, Rgb8 = 3 };

constexpr int channel_count(Channels c) noexcept { return static_cast<int>(c); }

/// Row-major 8-bit raster. The buffer always holds width * height * channels bytes.
class Image {
public:
    Image() = default;

    Image(int width, int height, Channels channels, std::uint8_t fill = 0)
        : width_(width), height_(height), channels_(channels) {
        if (width < 1 || height < 1) {
            throw InvalidDimensions("image must be at least 1x1, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
        }
        pixels_.assign(static_cast<std::size_t>(width) * height * adaprep::channel_count(channels), fill);
    }

    Image(int width, int height, Channels channels, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
        if (width < 1 || height < 1) {
            throw InvalidDimensions("image must be at least 1x1, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
        }
        const auto expected = static_cast<std::size_t>(width) * height * adaprep::channel_count(channels);
        if (pixels_.size() != expected) {
            throw InvalidDimensions("pixel buffer holds " + std::to_string(pixels_.size()) +
                                    " bytes, expected " + std::to_string(expected));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Channels channels() const noexcept { return channels_; }
    int channel_count() const noexcept { return adaprep::channel_count(channels_); }
    bool empty() const noexcept { return pixels_.empty(); }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width_) * channel_count(); }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    std::span<const std::uint8_t> row(int y) const noexcept {
        return {pixels_.data() + static_cast<std::size_t>(y) * row_stride(), row_stride()};
    }
    std::span<std::uint8_t> row(int y) noexcept {
        return {pixels_.data() + static_cast<std::size_t>(y) * row_stride(), row_stride()};
    }

    std::uint8_t at(int x, int y, int c = 0) const noexcept {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channel_count() + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) noexcept {
        return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channel_count() + c];
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    Channels channels_ = Channels::Gray8;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel Sobel magnitude, clamped to [0, 255].
struct GradientMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> magnitudes;

    std::uint8_t at(int x, int y) const noexcept {
        return magnitudes[static_cast<std::size_t>(y) * width + x];
    }
};

using Histogram = std::array<std::uint64_t, 256>;

namespace detail {

inline std::uint8_t round_to_u8(double v) noexcept {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

inline void require_gray(const Image& img, const char* op) {
    if (img.channels() != Channels::Gray8) {
        throw InvalidDimensions(std::string(op) + " expects a Gray8 image");
    }
}

} // namespace detail

/// BT.601 luma with round-half-up. Gray8 input is returned unchanged.
inline Image to_gray(const Image& img) {
    if (img.channels() == Channels::Gray8) {
        return img;
    }
    std::vector<std::uint8_t> out(img.pixel_count());
    const auto src = img.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        // Integer form of round(0.299 R + 0.587 G + 0.114 B), exact for 8-bit inputs.
        const std::uint32_t r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        out[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return Image(img.width(), img.height(), Channels::Gray8, std::move(out));
}

/// Bilinear resize with pixel-center alignment, sampling in source space
/// (no prefilter). Resizing to the same dimensions returns a bit-exact copy.
inline Image resize(const Image& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) {
        throw InvalidDimensions("resize target must be at least 1x1, got " +
                                std::to_string(out_w) + "x" + std::to_string(out_h));
    }
    if (out_w == img.width() && out_h == img.height()) {
        return img;
    }

    struct Tap {
        int i0;
        int i1;
        double f;
    };
    auto taps = [](int src, int dst) {
        std::vector<Tap> t(static_cast<std::size_t>(dst));
        const double scale = static_cast<double>(src) / dst;
        for (int i = 0; i < dst; ++i) {
            double s = (i + 0.5) * scale - 0.5;
            s = std::clamp(s, 0.0, static_cast<double>(src - 1));
            const int i0 = static_cast<int>(std::floor(s));
            const int i1 = std::min(i0 + 1, src - 1);
            t[static_cast<std::size_t>(i)] = {i0, i1, s - i0};
        }
        return t;
    };
    const auto xt = taps(img.width(), out_w);
    const auto yt = taps(img.height(), out_h);

    const int nc = img.channel_count();
    Image out(out_w, out_h, img.channels());
    for (int y = 0; y < out_h; ++y) {
        const Tap ty = yt[static_cast<std::size_t>(y)];
        const auto r0 = img.row(ty.i0);
        const auto r1 = img.row(ty.i1);
        auto dst = out.row(y);
        for (int x = 0; x < out_w; ++x) {
            const Tap tx = xt[static_cast<std::size_t>(x)];
            for (int c = 0; c < nc; ++c) {
                const double p00 = r0[static_cast<std::size_t>(tx.i0 * nc + c)];
                const double p01 = r0[static_cast<std::size_t>(tx.i1 * nc + c)];
                const double p10 = r1[static_cast<std::size_t>(tx.i0 * nc + c)];
                const double p11 = r1[static_cast<std::size_t>(tx.i1 * nc + c)];
                const double top = p00 + (p01 - p00) * tx.f;
                const double bot = p10 + (p11 - p10) * tx.f;
                dst[static_cast<std::size_t>(x * nc + c)] = detail::round_to_u8(top + (bot - top) * ty.f);
            }
        }
    }
    return out;
}

/// Dimensions after an aspect-preserving resize that puts the long side at `long_side`.
struct Dims {
    int width = 0;
    int height = 0;
    friend bool operator==(const Dims&, const Dims&) = default;
};

inline Dims fit_long_side(int w, int h, int long_side) {
    const int src_long = std::max(w, h);
    if (src_long == long_side) {
        return {w, h};
    }
    const double scale = static_cast<double>(long_side) / src_long;
    auto scaled = [&](int v) { return std::max(1, static_cast<int>(std::lround(v * scale))); };
    return w >= h ? Dims{long_side, scaled(h)} : Dims{scaled(w), long_side};
}

namespace detail {

/// Calls fn(x, y, gx, gy) for every pixel with the 3x3 Sobel responses,
/// borders handled by edge replication.
template <typename Fn>
void for_each_sobel(const Image& gray, Fn&& fn) {
    const int w = gray.width();
    const int h = gray.height();
    const auto px = gray.pixels();
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up = px.data() + static_cast<std::size_t>(std::max(y - 1, 0)) * w;
        const std::uint8_t* mid = px.data() + static_cast<std::size_t>(y) * w;
        const std::uint8_t* dn = px.data() + static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
        auto at = [&](int x, int l, int r) {
            const int gx = (up[r] + 2 * mid[r] + dn[r]) - (up[l] + 2 * mid[l] + dn[l]);
            const int gy = (dn[l] + 2 * dn[x] + dn[r]) - (up[l] + 2 * up[x] + up[r]);
            fn(x, y, gx, gy);
        };
        at(0, 0, std::min(1, w - 1));
        // Interior columns need no clamping; keeping them branch-free lets the
        // compiler vectorize this loop.
        for (int x = 1; x < w - 1; ++x) {
            at(x, x - 1, x + 1);
        }
        if (w > 1) {
            at(w - 1, w - 2, w - 1);
        }
    }
}

/// Magnitude as defined by gradient_magnitude, from the raw squared response.
inline std::uint8_t sobel_magnitude(int gx, int gy) noexcept {
    const double m = std::sqrt(static_cast<double>(gx * gx + gy * gy)) / 4.0;
    return static_cast<std::uint8_t>(std::min(255.0, std::floor(m + 0.5)));
}

/// Smallest squared Sobel response whose magnitude is >= threshold (threshold >= 1).
/// round(sqrt(s) / 4) >= t  <=>  sqrt(s) >= 4t - 2  <=>  s >= (4t - 2)^2.
constexpr int sobel_square_cutoff(int threshold) noexcept {
    const int root = 4 * threshold - 2;
    return root * root;
}

} // namespace detail

/// 3x3 Sobel magnitude, min(255, round(sqrt(gx^2 + gy^2) / 4)), edge-replicated borders.
inline GradientMap gradient_magnitude(const Image& gray) {
    detail::require_gray(gray, "gradient_magnitude");
    GradientMap gm{gray.width(), gray.height(), std::vector<std::uint8_t>(gray.pixel_count())};
    detail::for_each_sobel(gray, [&](int x, int y, int gx, int gy) {
        gm.magnitudes[static_cast<std::size_t>(y) * gm.width + x] = detail::sobel_magnitude(gx, gy);
    });
    return gm;
}

inline Histogram histogram256(const Image& gray) {
    detail::require_gray(gray, "histogram256");
    Histogram h{};
    for (const std::uint8_t v : gray.pixels()) {
        ++h[v];
    }
    return h;
}

} // namespace adaprep
