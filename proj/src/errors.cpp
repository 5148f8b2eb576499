#include "seqpack/errors.hpp"

namespace seqpack {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(line > 0 ? message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : message),
      m_line(line),
      m_column(column)
{
}

} // namespace seqpack
