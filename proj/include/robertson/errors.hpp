#ifndef ROBERTSON_ERRORS_HPP
#define ROBERTSON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace robertson
{

// Base of every numerical failure raised by the library. The CLI maps
// these to exit code 65.
class evaluation_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Constant term of a divisor (or of a log/pow argument) is numerically zero.
class division_by_singular_series : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// Series evaluated outside its guard radius.
class outside_guard_radius : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// |f'(z)| fell below the local-univalence threshold.
class vanishing_derivative : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// g(z) = 0 at a sampled z != 0 while forming z g'/g.
class zero_value_encountered : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// Denominator of the phi-transform vanished.
class phi_pole_encountered : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// Adaptive quadrature ran out of panels.
class max_subdivisions : public evaluation_error
{
public:
    using evaluation_error::evaluation_error;
};

// Invalid argument to a constructor or operation (bad alpha, bad plan, ...).
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace robertson

#endif
