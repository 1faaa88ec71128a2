#ifndef XCF_ERRORS_HPP
#define XCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xcf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad user input (unknown geometry, nonpositive metric, malformed config).
struct InvalidInput : Error {
    using Error::Error;
};

/// The raised Einstein tensor is not invertible (some k_i = 0).
struct SingularTensor : Error {
    using Error::Error;
};

/// The requested quantity does not exist for this geometry / trajectory.
struct NotApplicable : Error {
    using Error::Error;
};

/// Closed-form solution evaluated outside its existence interval.
struct OutOfDomain : Error {
    using Error::Error;
};

/// Not enough samples inside the requested fit window.
struct WindowError : Error {
    using Error::Error;
};

/// Bisection endpoints do not bracket the separatrix.
struct BracketError : Error {
    using Error::Error;
};

/// An endpoint classification came back Undetermined; a larger budget may help.
struct InconclusiveBracket : Error {
    using Error::Error;
};

} // namespace xcf

#endif
