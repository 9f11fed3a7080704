#pragma once

#include <stdexcept>
#include <string>

namespace elprov {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceSpan {
    int line = 1;
    int column = 1;
};

// Parse failures always carry a position.
class ParseError : public Error {
public:
    ParseError(SourceSpan span, const std::string& msg)
        : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + msg),
          span_(span) {}
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

#define ELPROV_PARSE_ERROR(Name)                   \
    class Name : public ParseError {               \
    public:                                        \
        using ParseError::ParseError;              \
    }

ELPROV_PARSE_ERROR(SyntaxError);
ELPROV_PARSE_ERROR(DuplicateAnnotation);
ELPROV_PARSE_ERROR(ReservedIdentifier);
ELPROV_PARSE_ERROR(IllegalRightSide);
ELPROV_PARSE_ERROR(UnsafeQuery);
ELPROV_PARSE_ERROR(DuplicateVariable);

#undef ELPROV_PARSE_ERROR

#define ELPROV_ERROR(Name)            \
    class Name : public Error {       \
    public:                           \
        using Error::Error;           \
    }

ELPROV_ERROR(FlagViolation);
ELPROV_ERROR(MissingValuation);
ELPROV_ERROR(TopUndefined);
ELPROV_ERROR(UnknownSemiring);
ELPROV_ERROR(NotNormalForm);
ELPROV_ERROR(NotELHIrestr);
ELPROV_ERROR(UnsupportedAxiom);
ELPROV_ERROR(ArityMismatch);
ELPROV_ERROR(NotTreeShaped);
ELPROV_ERROR(UnsatisfiableOntology);
ELPROV_ERROR(UnsatisfiableLHS);
ELPROV_ERROR(BoundExceeded);

#undef ELPROV_ERROR

}  // namespace elprov
