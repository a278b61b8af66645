#pragma once

// Patch-grid visual-token accounting: one token per patch x patch tile.

#include "adaprep/errors.hpp"
#include "adaprep/image.hpp"

#include <cstdint>
#include <string>

namespace adaprep {

struct TokenStats {
    int width = 0;
    int height = 0;
    int patch = 0;
    std::int64_t token_count = 0;

    friend bool operator==(const TokenStats&, const TokenStats&) = default;
};

/// Rounds each side up to the next multiple of patch (at least one patch).
constexpr Dims snap_dims(int w, int h, int patch) noexcept {
    auto up = [patch](int v) { return ((std::max(v, 1) + patch - 1) / patch) * patch; };
    return {up(w), up(h)};
}

inline std::int64_t token_count(int w, int h, int patch) {
    if (patch < 1 || w < patch || h < patch || w % patch != 0 || h % patch != 0) {
        throw UnalignedDims(std::to_string(w) + "x" + std::to_string(h) + " is not a grid of " +
                            std::to_string(patch) + "-px patches");
    }
    return static_cast<std::int64_t>(w / patch) * (h / patch);
}

inline TokenStats token_stats(int w, int h, int patch) {
    return {w, h, patch, token_count(w, h, patch)};
}

/// 1 - adaptive/baseline. Negative when the adaptive path used more tokens.
inline double reduction(const TokenStats& base, const TokenStats& adapt) {
    if (base.token_count < 1) {
        throw InvalidDimensions("baseline token count must be at least 1");
    }
    return 1.0 - static_cast<double>(adapt.token_count) / static_cast<double>(base.token_count);
}

} // namespace adaprep
