#pragma once

#include "adaprep/analyzer.hpp"
#include "adaprep/errors.hpp"

#include <optional>
#include <string>

namespace adaprep {

/// Long-side resolution per complexity tier. All sides are multiples of `patch`.
struct ResolutionPolicy {
    int low_side = 512;
    int medium_side = 768;
    int high_side = 1024;
    /// Unset means "same as high_side".
    std::optional<int> baseline_override;
    int patch = 64;

    int baseline_side() const noexcept { return baseline_override.value_or(high_side); }

    const ResolutionPolicy& validate() const {
        if (patch < 1) {
            throw ConfigError("policy.patch must be positive");
        }
        if (!(low_side <= medium_side && medium_side <= high_side)) {
            throw ConfigError("policy tiers must satisfy low_side <= medium_side <= high_side");
        }
        for (const auto& [name, side] : {std::pair{"low_side", low_side}, std::pair{"medium_side", medium_side},
                                         std::pair{"high_side", high_side},
                                         std::pair{"baseline_side", baseline_side()}}) {
            if (side < 1 || side % patch != 0) {
                throw ConfigError(std::string("policy.") + name + " = " + std::to_string(side) +
                                  " is not a positive multiple of patch " + std::to_string(patch));
            }
        }
        return *this;
    }
};

constexpr int select_resolution(ComplexityClass c, const ResolutionPolicy& policy) noexcept {
    switch (c) {
    case ComplexityClass::Low: return policy.low_side;
    case ComplexityClass::Medium: return policy.medium_side;
    case ComplexityClass::High: return policy.high_side;
    }
    return policy.high_side;
}

} // namespace adaprep
