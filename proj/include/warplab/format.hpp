#pragma once

#include <string>

namespace warplab {

/// Shortest decimal string that round-trips to the same double. "nan"/"inf"/"-inf" for non-finite.
std::string format_double(double x);

}  // namespace warplab
