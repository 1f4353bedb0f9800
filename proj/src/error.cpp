#include "prepot/error.hpp"

namespace prepot {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      kind_(kind),
      line_(line),
      column_(column) {}

ScenarioError::ScenarioError(Kind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace prepot
