#pragma once

#include <stdexcept>
#include <string>

namespace entromono {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments live in different ambient groups / spaces.
struct AmbientMismatchError : Error {
    using Error::Error;
};

// A configurable size or search budget was exceeded; the caller asked for an
// exact answer that cannot be produced within the cap, so we fail loudly.
struct ResourceLimitError : Error {
    using Error::Error;
};

// A subgroup handed to invariant_restriction_and_quotient is not invariant;
// carries the violating generator index and element description.
struct NotInvariantError : Error {
    NotInvariantError(std::size_t generator, std::string element, const std::string& what)
        : Error(what), generator_index(generator), violating_element(std::move(element)) {}
    std::size_t generator_index;
    std::string violating_element;
};

// Kernel / core stabilization did not terminate within the horizon for an
// unsupported carrier/action combination.
struct HorizonExhaustionError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

}  // namespace entromono
