#include "hopqpp/error.hpp"

namespace hopqpp {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Ingest: return "ingest";
    case ErrorKind::EmptyIndex: return "empty-index";
    case ErrorKind::Load: return "load";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::UndefinedCoefficient: return "undefined-coefficient";
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    }
    return "unknown";
}

}  // namespace hopqpp
