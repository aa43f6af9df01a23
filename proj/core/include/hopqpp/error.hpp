#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hopqpp {

/// Broad failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    InvalidArgument,
    Ingest,
    EmptyIndex,
    Load,
    Validation,
    Alignment,
    UndefinedCoefficient,
    Io,
    Schema,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), m_kind(kind)
    {}

    [[nodiscard]] ErrorKind kind() const noexcept { return m_kind; }

  private:
    ErrorKind m_kind;
};

}  // namespace hopqpp
