#pragma once

#include <stdexcept>
#include <string>

namespace hmlid {

enum class ErrorKind {
    Decode,        // malformed input encoding
    Parse,         // malformed model/rule/testset file
    Integrity,     // internal consistency violated (duplicate key, bad span)
    Config,        // invalid option or threshold value
    Io,            // filesystem failure
    Precondition,  // caller violated a documented precondition
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hmlid
