#pragma once

#include <functional>
#include <string_view>

namespace gcnsel {

using WarningSink = std::function<void(std::string_view)>;

// Emits a warning through the current sink (stderr by default).
void warn(std::string_view message);

// Replaces the warning sink and returns the previous one. Passing an empty
// function restores the stderr sink.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace gcnsel
