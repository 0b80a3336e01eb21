#pragma once

#include <stdexcept>
#include <string>

namespace torque {

// File and stream failures (unreadable input, malformed header, short read).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failures detected while computing (insufficient timer resolution,
// non-finite intermediate values).
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace torque
