#pragma once

#include <stdexcept>
#include <string>

namespace vesselmat {

enum class ErrorKind {
    Io,
    Format,
    Manifest,
    FovEstimation,
    Config,
    Level,
    Lookup,
    Stratification,
    Shape,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind)
    {
    }
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace vesselmat
