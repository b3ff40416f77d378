#pragma once

#include <string>

namespace sparsepde {

/// Shortest decimal string that reads back to the same double, independent
/// of the global locale. NaN formats as an empty string.
std::string format_double(double x);

}  // namespace sparsepde
