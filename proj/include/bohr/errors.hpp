#pragma once

#include <stdexcept>
#include <string>

namespace bohr {

/// Base class for all domain errors raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that fails a structural validity check (non-Hermitian matrix,
/// atoms that are not a partition of the identity, malformed witness basis, ...).
struct invariant_error : error {
    using error::error;
};

struct invalid_operator_error : invariant_error {
    using invariant_error::invariant_error;
};

struct invalid_family_error : invariant_error {
    using invariant_error::invariant_error;
};

struct invalid_basis_error : invariant_error {
    using invariant_error::invariant_error;
};

struct dimension_mismatch_error : invariant_error {
    using invariant_error::invariant_error;
};

struct non_commuting_error : invariant_error {
    using invariant_error::invariant_error;
};

struct not_a_subcontext_error : invariant_error {
    using invariant_error::invariant_error;
};

struct not_in_context_error : invariant_error {
    using invariant_error::invariant_error;
};

struct poset_mismatch_error : invariant_error {
    using invariant_error::invariant_error;
};

struct variance_violation_error : invariant_error {
    using invariant_error::invariant_error;
};

struct not_representable_error : invariant_error {
    using invariant_error::invariant_error;
};

/// Exact backend asked to decompose an operator whose spectrum is not rational.
struct irrational_spectrum_error : invariant_error {
    using invariant_error::invariant_error;
};

/// Malformed input file or JSON document.
struct parse_error : error {
    using error::error;
};

/// Lookup of a name that does not exist in the session spec.
struct unknown_name_error : error {
    using error::error;
};

} // namespace bohr
