#pragma once

#include <stdexcept>
#include <string>

namespace chebdde {

/// Raised when a dense factorisation meets a zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// A delayed argument left the solve interval and no history was supplied.
class MissingHistoryError : public std::runtime_error {
public:
    explicit MissingHistoryError(const std::string& what) : std::runtime_error(what) {}
};

/// The delay map cannot be handled automatically (e.g. it is not monotone).
class UnsupportedDelayError : public std::runtime_error {
public:
    explicit UnsupportedDelayError(const std::string& what) : std::runtime_error(what) {}
};

class OutOfDomainError : public std::out_of_range {
public:
    explicit OutOfDomainError(const std::string& what) : std::out_of_range(what) {}
};

/// The eigenvalue shift coincides with an eigenvalue of the pencil.
class ShiftCollisionError : public std::runtime_error {
public:
    explicit ShiftCollisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chebdde
