#ifndef AIRYPROC_FORMAT_HPP
#define AIRYPROC_FORMAT_HPP

#include <string>

namespace airyproc {

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

}  // namespace airyproc

#endif  // AIRYPROC_FORMAT_HPP
