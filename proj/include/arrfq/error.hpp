#pragma once

#include <stdexcept>
#include <string>

namespace arrfq {

/// Raised when a computation would exceed a configured resource cap
/// (field size, group enumeration, closure size, orbit count).
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by simpliciality tests on arrangements whose lines all pass
/// through one point (or that have fewer than two intersection points).
class NonEssential : public std::invalid_argument {
public:
    explicit NonEssential(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace arrfq
