#pragma once
#include <stdexcept>
#include <string>

namespace corrbound {

// Input exceeds a documented enumeration/size cap.
struct SizeCapError : std::runtime_error {
    explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical premise of a bound was violated by the data.
struct PremiseError : std::runtime_error {
    explicit PremiseError(const std::string& what) : std::runtime_error(what) {}
};

// Bad run configuration (CLI flags / config file).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace corrbound
