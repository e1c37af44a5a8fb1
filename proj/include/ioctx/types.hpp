#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ioctx {

// Binary mobility context. Numeric values are used as class indices.
enum class Context : std::uint8_t { outdoor = 0, indoor = 1 };

inline constexpr int kNumClasses = 2;

inline constexpr int class_index(Context c) { return static_cast<int>(c); }
inline constexpr Context context_from_index(int i) { return i == 0 ? Context::outdoor : Context::indoor; }

std::string_view to_string(Context c);
// Accepts "indoor"/"outdoor" (also "1"/"0"). Throws InvalidInput otherwise.
Context parse_context(std::string_view s);

}  // namespace ioctx
