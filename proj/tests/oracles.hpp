#pragma once

// Direct-definition reference implementations used only by tests. They share
// no code paths with the library beyond the Image container.

#include "adaprep/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using adaprep::Image;

inline int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

inline int px(const Image& g, int x, int y) { return g.at(clamp_index(x, g.width()), clamp_index(y, g.height())); }

/// Sobel magnitude at (x, y) straight from the kernel definition.
inline int sobel(const Image& g, int x, int y) {
    static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    long gx = 0, gy = 0;
    for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
            gx += kx[j + 1][i + 1] * px(g, x + i, y + j);
            gy += ky[j + 1][i + 1] * px(g, x + i, y + j);
        }
    }
    const double m = std::round(std::hypot(static_cast<double>(gx), static_cast<double>(gy)) / 4.0);
    return static_cast<int>(std::min(255.0, m));
}

inline std::vector<std::uint64_t> histogram(const Image& g) {
    std::map<int, std::uint64_t> counts;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) counts[g.at(x, y)] += 1;
    std::vector<std::uint64_t> out(256, 0);
    for (const auto& [v, c] : counts) out[static_cast<std::size_t>(v)] = c;
    return out;
}

/// Entropy via natural logs, converted at the end.
inline double entropy(const std::vector<std::uint64_t>& h) {
    double n = 0;
    for (auto c : h) n += static_cast<double>(c);
    double nats = 0;
    for (auto c : h) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        nats += p * std::log(1.0 / p);
    }
    return nats / std::log(2.0);
}

/// Bilinear value at output pixel (ox, oy) evaluated from the resampling definition.
inline double bilinear_sample(const Image& src, int out_w, int out_h, int ox, int oy, int c = 0) {
    auto coord = [](int o, int src_n, int dst_n) {
        const double s = (o + 0.5) * src_n / dst_n - 0.5;
        return std::min(std::max(s, 0.0), static_cast<double>(src_n - 1));
    };
    const double sx = coord(ox, src.width(), out_w);
    const double sy = coord(oy, src.height(), out_h);
    const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, src.width() - 1), y1 = std::min(y0 + 1, src.height() - 1);
    const double fx = sx - x0, fy = sy - y0;
    return (1 - fx) * (1 - fy) * src.at(x0, y0, c) + fx * (1 - fy) * src.at(x1, y0, c) +
           (1 - fx) * fy * src.at(x0, y1, c) + fx * fy * src.at(x1, y1, c);
}

/// Two-pass SSIM over non-overlapping 8x8 windows.
inline double ssim(const Image& a, const Image& b) {
    const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
    double total = 0;
    int windows = 0;
    for (int by = 0; by + 8 <= a.height(); by += 8) {
        for (int bx = 0; bx + 8 <= a.width(); bx += 8) {
            double ma = 0, mb = 0;
            for (int y = by; y < by + 8; ++y)
                for (int x = bx; x < bx + 8; ++x) {
                    ma += a.at(x, y);
                    mb += b.at(x, y);
                }
            ma /= 64;
            mb /= 64;
            double va = 0, vb = 0, cov = 0;
            for (int y = by; y < by + 8; ++y)
                for (int x = bx; x < bx + 8; ++x) {
                    va += (a.at(x, y) - ma) * (a.at(x, y) - ma);
                    vb += (b.at(x, y) - mb) * (b.at(x, y) - mb);
                    cov += (a.at(x, y) - ma) * (b.at(x, y) - mb);
                }
            va /= 64;
            vb /= 64;
            cov /= 64;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++windows;
        }
    }
    return total / windows;
}

/// Otsu by exhaustive search over pixels: maximise w0*w1*(m0-m1)^2.
inline int otsu(const Image& g) {
    int best_t = 0;
    double best = -1;
    for (int t = 0; t < 256; ++t) {
        double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (int y = 0; y < g.height(); ++y)
            for (int x = 0; x < g.width(); ++x) {
                const int v = g.at(x, y);
                if (v <= t) { n0 += 1; s0 += v; } else { n1 += 1; s1 += v; }
            }
        if (n0 == 0 || n1 == 0) continue;
        const double d = s0 / n0 - s1 / n1;
        const double between = n0 * n1 * d * d;
        if (between > best) { best = between; best_t = t; }
    }
    return best_t;
}

inline double text_density(const Image& g) {
    if (g.width() < 2) return 0;
    const int t = otsu(g);
    int rows = 0;
    for (int y = 0; y < g.height(); ++y) {
        int tr = 0;
        for (int x = 1; x < g.width(); ++x) tr += (g.at(x, y) > t) != (g.at(x - 1, y) > t);
        if (tr >= std::max(4.0, g.width() / 50.0)) ++rows;
    }
    return static_cast<double>(rows) / g.height();
}

/// Content test straight from the definition, using oracle::sobel.
inline std::vector<std::uint8_t> content_mask(const Image& g, int grad_threshold, int bg_delta) {
    std::map<int, int> ring;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x)
            if (x == 0 || y == 0 || x == g.width() - 1 || y == g.height() - 1) ring[g.at(x, y)] += 1;
    int bg = 0, best = -1;
    for (const auto& [v, c] : ring)
        if (c > best) { best = c; bg = v; }
    std::vector<std::uint8_t> m(g.pixel_count());
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x)
            m[static_cast<std::size_t>(y) * g.width() + x] =
                std::abs(g.at(x, y) - bg) >= bg_delta || sobel(g, x, y) >= grad_threshold;
    return m;
}

struct Box {
    int x, y, w, h;
};

/// Tightest box around set pixels, padded by round(margin * dim) and clamped.
inline std::optional<Box> padded_bbox(const std::vector<std::uint8_t>& bits, int w, int h, double margin) {
    int minx = w, miny = h, maxx = -1, maxy = -1;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (bits[static_cast<std::size_t>(y) * w + x]) {
                minx = std::min(minx, x);
                maxx = std::max(maxx, x);
                miny = std::min(miny, y);
                maxy = std::max(maxy, y);
            }
    if (maxx < 0) return std::nullopt;
    const int mx = static_cast<int>(std::round(margin * w)), my = static_cast<int>(std::round(margin * h));
    minx = std::max(0, minx - mx);
    miny = std::max(0, miny - my);
    maxx = std::min(w - 1, maxx + mx);
    maxy = std::min(h - 1, maxy + my);
    return Box{minx, miny, maxx - minx + 1, maxy - miny + 1};
}

inline Image random_gray(std::mt19937_64& rng, int w, int h) {
    Image img(w, h, adaprep::Channels::Gray8);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

} // namespace oracle
