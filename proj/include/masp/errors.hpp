#pragma once

#include <stdexcept>
#include <string>

namespace masp {

// All-zero spectrum where a distribution is required, silence where a
// pitch product is required, and similar unusable-signal conditions.
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Parameter/precondition violations are reported as std::invalid_argument.

} // namespace masp
