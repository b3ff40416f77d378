#include "sparsepde/format.hpp"

#include <charconv>
#include <cmath>

namespace sparsepde {

std::string format_double(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace sparsepde
