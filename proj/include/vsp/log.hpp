#pragma once

#include <functional>
#include <string_view>

namespace vsp {

// Warnings go to stderr unless a sink is installed (tests capture them).
using LogSink = std::function<void(std::string_view)>;

void log_warning(std::string_view message);
// Returns the previous sink; an empty sink restores stderr output.
LogSink set_log_sink(LogSink sink);

}  // namespace vsp
