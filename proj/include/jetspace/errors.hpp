#ifndef JETSPACE_ERRORS_HPP
#define JETSPACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jetspace
{

// Raised when an operation is called outside its documented domain
// (bad parameters, mismatched variable counts, orders exceeding a bound).
class precondition_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when two computations that must agree do not, or when a search
// that is guaranteed to terminate runs out of budget. Never swallowed.
class inconsistency_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{

inline void require(bool cond, const std::string &what)
{
    if (!cond) {
        throw precondition_error(what);
    }
}

} // namespace detail

} // namespace jetspace

#endif
