#pragma once

#include <stdexcept>
#include <string>

namespace bimf {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// Parameters outside the analytically supported case (e.g. non-symmetric
/// model passed to a symmetric-only routine).
class unsupported_case_error : public error {
public:
    using error::error;
};

/// Interaction matrix degenerate (zero leading eigenvalue, or j12 = 0 which
/// decouples the model into two independent single-population models).
class degenerate_model_error : public error {
public:
    using error::error;
};

/// The requested scalar equation has no root in the admissible range.
class no_root_error : public error {
public:
    using error::error;
};

/// Operation called outside the parameter regime it is defined for.
class regime_error : public error {
public:
    using error::error;
};

/// Problem size exceeds the configured resource cap.
class resource_error : public error {
public:
    using error::error;
};

/// A point handed to a classifier is not a critical point.
class not_critical_error : public error {
public:
    using error::error;
};

/// An internal numeric solve failed to converge.
class solver_error : public error {
public:
    using error::error;
};

} // namespace bimf
