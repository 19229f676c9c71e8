#pragma once

#include <stdexcept>
#include <string>

namespace socnet {

// Bad input or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Failure while computing or writing results (exit code 2).
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lookup of an entity, document or group that is not present.
class NotFoundError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace socnet
