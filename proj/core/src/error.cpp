#include "dualk/error.hpp"

namespace dualk {

ParseError::ParseError(std::size_t row, const std::string& what)
    : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

}  // namespace dualk
