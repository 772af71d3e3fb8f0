#pragma once

#include <string>

namespace profile_lab {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double x);

}  // namespace profile_lab
