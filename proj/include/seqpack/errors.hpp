#pragma once

#include <stdexcept>
#include <string>

namespace seqpack {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define SEQPACK_DEFINE_ERROR(Name)           \
    class Name : public Error                \
    {                                        \
    public:                                  \
        using Error::Error;                  \
    }

// geometry
SEQPACK_DEFINE_ERROR(DegenerateInput);
SEQPACK_DEFINE_ERROR(InvalidPolygon);
SEQPACK_DEFINE_ERROR(InvalidScale);

// model
SEQPACK_DEFINE_ERROR(InvalidInstance);
SEQPACK_DEFINE_ERROR(TieError);

// encoder
SEQPACK_DEFINE_ERROR(DegenerateEdge);
SEQPACK_DEFINE_ERROR(ParallelEdges);
SEQPACK_DEFINE_ERROR(UndeclaredVariable);

// smt
SEQPACK_DEFINE_ERROR(SolverSpawnError);
SEQPACK_DEFINE_ERROR(HandshakeError);
SEQPACK_DEFINE_ERROR(StackUnderflow);
SEQPACK_DEFINE_ERROR(SolverProtocolError);
SEQPACK_DEFINE_ERROR(MalformedModelValue);

// cegar / verify
SEQPACK_DEFINE_ERROR(ObjectNeverFits);
SEQPACK_DEFINE_ERROR(MissingPlacement);

#undef SEQPACK_DEFINE_ERROR

/// Input-file error carrying a 1-based source position (0 when unknown).
class ParseError : public Error
{
public:
    ParseError(const std::string& message, int line = 0, int column = 0);

    int line() const { return m_line; }
    int column() const { return m_column; }

private:
    int m_line;
    int m_column;
};

} // namespace seqpack
