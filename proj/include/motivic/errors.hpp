#ifndef MOTIVIC_ERRORS_HPP
#define MOTIVIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace motivic
{

// Input violates a documented precondition (malformed data, inconsistent
// resolution data, invalid field presentation, ...).
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A configured resource cap (truncation order, jet-matrix size) was hit
// before the computation could produce a certain answer.
class resource_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// An internal cross-check failed. Seeing one of these means a bug.
class internal_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace motivic

#endif
