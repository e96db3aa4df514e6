#ifndef EXPNEED_ERROR_HPP
#define EXPNEED_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace expneed {

// Error categories line up with the CLI exit codes.
enum class ErrorKind {
    validation = 2,
    model_io = 3,
    internal = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

/// Input rejected while reading a file; carries the 1-based data row
/// (header excluded) when the problem is local to one row.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message,
                             std::optional<std::size_t> row = std::nullopt)
        : Error(ErrorKind::validation, format(message, row)), row_(row), reason_(message) {}

    std::optional<std::size_t> row() const noexcept { return row_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    static std::string format(const std::string& message, std::optional<std::size_t> row) {
        if (!row) return message;
        return "row " + std::to_string(*row) + ": " + message;
    }

    std::optional<std::size_t> row_;
    std::string reason_;
};

class ModelIoError : public Error {
public:
    explicit ModelIoError(const std::string& message) : Error(ErrorKind::model_io, message) {}
};

}  // namespace expneed

#endif
