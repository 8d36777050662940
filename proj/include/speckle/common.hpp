#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace speckle {

struct Dims {
    int width = 0;
    int height = 0;

    long long pixels() const { return static_cast<long long>(width) * height; }
    bool positive() const { return width > 0 && height > 0; }
    bool operator==(const Dims&) const = default;
};

inline std::string to_string(const Dims& d) {
    return std::to_string(d.width) + "x" + std::to_string(d.height);
}

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Raised when a statistical routine has too little data; carries the minimum
// so callers can report it.
class InsufficientData : public std::runtime_error {
public:
    InsufficientData(const std::string& what, long long minimum)
        : std::runtime_error(what), minimum_(minimum) {}
    long long minimum() const { return minimum_; }

private:
    long long minimum_ = 0;
};

}  // namespace speckle
