#pragma once

// Seeded synthetic document pages with known intended complexity. Text is
// emulated by stripe blocks: 4-px dark rows broken into word-length runs,
// alternating with 4-px light rows.

#include "adaprep/analyzer.hpp"
#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace adaprep {

struct CorpusSpec {
    std::uint64_t seed = 42;
    int count_low = 12;
    int count_medium = 10;
    int count_high = 10;
    int page_w = 1700;
    int page_h = 2200;

    const CorpusSpec& validate() const {
        if (count_low < 0 || count_medium < 0 || count_high < 0) {
            throw ConfigError("corpus counts must be non-negative");
        }
        if (page_w < 256 || page_h < 256) {
            throw ConfigError("corpus pages must be at least 256x256");
        }
        return *this;
    }
    int total() const noexcept { return count_low + count_medium + count_high; }
};

struct CorpusPage {
    std::string filename;
    ComplexityClass intended = ComplexityClass::Low;
    std::uint64_t seed = 0;
    Image image;
};

/// Rectangle in page coordinates.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

namespace corpus_detail {

inline constexpr std::uint8_t kPaper = 255;
inline constexpr int kStripe = 4;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform integer in [lo, hi]. Modulo draw: portable across standard libraries.
    int uniform(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline void fill(Image& page, Rect r, std::uint8_t v) {
    const int x0 = std::max(r.x, 0), y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.w, page.width()), y1 = std::min(r.y + r.h, page.height());
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            page.at(x, y) = v;
        }
    }
}

} // namespace corpus_detail

/// Paints a text-like stripe block into `page` (Gray8): dark rows of 4 px
/// holding word runs, separated by 4-px light rows.
inline void stripe_block(Image& page, Rect r, std::uint64_t seed, std::uint8_t ink = 30) {
    detail::require_gray(page, "stripe_block");
    corpus_detail::Rng rng(seed);
    for (int line = r.y; line + corpus_detail::kStripe <= r.y + r.h; line += 2 * corpus_detail::kStripe) {
        int x = r.x;
        while (x < r.x + r.w) {
            const int word = std::min(rng.uniform(14, 60), r.x + r.w - x);
            corpus_detail::fill(page, {x, line, word, corpus_detail::kStripe}, ink);
            x += word + rng.uniform(6, 12);
        }
    }
}

namespace corpus_detail {

inline void low_page(Image& page, Rng& rng) {
    const int W = page.width(), H = page.height();
    // One small paragraph, at most ~8.5% of a default page.
    const int bw = std::min(W - 2, rng.uniform(W * 30 / 100, W * 45 / 100));
    const int bh = std::min(H - 2, rng.uniform(H * 9 / 100, H * 17 / 100));
    const int bx = rng.uniform(W * 10 / 100, W - bw - W * 10 / 100);
    const int by = rng.uniform(H * 10 / 100, H - bh - H * 10 / 100);
    stripe_block(page, {bx, by, bw, bh}, static_cast<std::uint64_t>(rng.uniform(0, 1 << 30)),
                 static_cast<std::uint8_t>(rng.uniform(20, 60)));
}

inline void medium_page(Image& page, Rng& rng) {
    const int W = page.width(), H = page.height();
    const int blocks = rng.uniform(2, 3);
    const double target = rng.uniform(30, 40) / 100.0;
    const int col_x = rng.uniform(W * 10 / 100, W * 14 / 100);
    const int col_w = W - 2 * col_x;
    const int total_h = static_cast<int>(target * W * H / col_w);
    const int gap = H * 4 / 100;
    int y = rng.uniform(H * 10 / 100, std::max(H * 10 / 100, H - total_h - (blocks + 1) * gap - H * 8 / 100));

    // Rule line under a heading-like band.
    fill(page, {col_x, y, col_w, 3}, static_cast<std::uint8_t>(rng.uniform(20, 60)));
    y += gap;
    for (int b = 0; b < blocks; ++b) {
        const int bh = total_h / blocks;
        stripe_block(page, {col_x, y, col_w, bh}, static_cast<std::uint64_t>(rng.uniform(0, 1 << 30)),
                     static_cast<std::uint8_t>(rng.uniform(20, 60)));
        y += bh + gap;
    }
}

inline void high_page(Image& page, Rng& rng) {
    const int W = page.width(), H = page.height();
    const int margin = rng.uniform(12, 28);
    const std::uint8_t rule = static_cast<std::uint8_t>(rng.uniform(0, 40));
    std::vector<int> xs{margin}, ys{margin};
    while (xs.back() < W - margin) xs.push_back(std::min(xs.back() + rng.uniform(40, 80), W - margin));
    while (ys.back() < H - margin) ys.push_back(std::min(ys.back() + rng.uniform(40, 80), H - margin));
    for (const int x : xs) fill(page, {x, margin, 1, H - 2 * margin}, rule);
    for (const int y : ys) fill(page, {margin, y, W - 2 * margin, 1}, rule);
    // Fill every cell with text rows.
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const Rect cell{xs[i] + 4, ys[j] + 4, xs[i + 1] - xs[i] - 7, ys[j + 1] - ys[j] - 7};
            if (cell.w > 4 && cell.h >= kStripe) {
                stripe_block(page, cell, static_cast<std::uint64_t>(rng.uniform(0, 1 << 30)),
                             static_cast<std::uint8_t>(rng.uniform(20, 90)));
            }
        }
    }
}

} // namespace corpus_detail

inline CorpusPage generate_page(ComplexityClass intended, std::uint64_t page_seed, int page_w, int page_h) {
    Image page(page_w, page_h, Channels::Gray8, corpus_detail::kPaper);
    corpus_detail::Rng rng(page_seed);
    switch (intended) {
    case ComplexityClass::Low: corpus_detail::low_page(page, rng); break;
    case ComplexityClass::Medium: corpus_detail::medium_page(page, rng); break;
    case ComplexityClass::High: corpus_detail::high_page(page, rng); break;
    }
    return {"", intended, page_seed, std::move(page)};
}

/// Pages in manifest order: all Low, then Medium, then High.
inline std::vector<CorpusPage> generate(const CorpusSpec& spec = {}) {
    spec.validate();
    std::vector<CorpusPage> pages;
    pages.reserve(static_cast<std::size_t>(spec.total()));
    int index = 0;
    auto emit = [&](ComplexityClass c, int count) {
        for (int i = 0; i < count; ++i, ++index) {
            CorpusPage p = generate_page(c, corpus_detail::mix(spec.seed + static_cast<std::uint64_t>(index)),
                                         spec.page_w, spec.page_h);
            char name[64];
            std::snprintf(name, sizeof name, "doc_%03d_%s.png", index, std::string(to_string(c)).c_str());
            p.filename = name;
            pages.push_back(std::move(p));
        }
    };
    emit(ComplexityClass::Low, spec.count_low);
    emit(ComplexityClass::Medium, spec.count_medium);
    emit(ComplexityClass::High, spec.count_high);
    return pages;
}

} // namespace adaprep
