#include "graft/error.hpp"

namespace graft {

FormatError::FormatError(const std::string& detail, std::size_t line, const std::string& source)
    : Error(source.empty() ? "line " + std::to_string(line) + ": " + detail
                           : source + ":" + std::to_string(line) + ": " + detail),
      line_(line),
      detail_(detail) {}

StageError::StageError(std::string stage, const std::string& what)
    : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

}  // namespace graft
