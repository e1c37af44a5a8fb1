#include "ioctx/types.hpp"

#include "ioctx/error.hpp"

namespace ioctx {

std::string_view to_string(Context c) { return c == Context::indoor ? "indoor" : "outdoor"; }

Context parse_context(std::string_view s) {
  if (s == "indoor" || s == "1") return Context::indoor;
  if (s == "outdoor" || s == "0") return Context::outdoor;
  throw InvalidInput("unknown context label `" + std::string(s) + "`");
}

}  // namespace ioctx
