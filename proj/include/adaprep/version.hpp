#pragma once

#include <string_view>

#ifndef ADAPREP_VERSION
#define ADAPREP_VERSION "0.0.0-dev"
#endif

namespace adaprep {

inline constexpr std::string_view kVersion = ADAPREP_VERSION;

/// Identifier embedded in every report.
inline constexpr std::string_view build_id() noexcept { return "adaprep-" ADAPREP_VERSION; }

} // namespace adaprep
