#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace epidiffuse {

using Array = Eigen::ArrayXd;
using Array2d = Eigen::ArrayXXd;

/// User-supplied input is malformed (bad config key, unparseable value, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A formula's hypothesis is violated where the result would be meaningless
/// (e.g. K with mu = 0 in strict mode, delta_max with a <= 0).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite data was produced or detected; carries the first offending cell.
struct IntegrityError : std::runtime_error {
    IntegrityError(const std::string& what, long cell, double t)
        : std::runtime_error(what), cell(cell), t(t) {}
    long cell = -1;
    double t = 0.0;
};

/// The (u,w) diagonalizing transform needs d > a and mu > 0.
struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace epidiffuse
