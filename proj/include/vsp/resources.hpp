#pragma once

#include <optional>
#include <string_view>

namespace vsp {

// Text files from data/templates and data/patterns compiled into the
// library, keyed "templates/<file>" and "patterns/<file>". Content is
// byte-exact, including the trailing newline.
std::optional<std::string_view> find_resource(std::string_view name);

}  // namespace vsp
