#pragma once

#include <functional>
#include <string_view>

namespace geoimpute {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes a non-fatal diagnostic to the installed handler (stderr by default).
void warn(std::string_view message);

/// Installs a handler and returns the previous one. An empty handler restores
/// the stderr default.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace geoimpute
