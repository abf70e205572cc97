#pragma once

#include "epidiffuse/grid.hpp"

namespace epidiffuse {

/// Time t plus the two density fields on a shared grid.
struct State {
    double t = 0.0;
    Field u;
    Field v;
};

/// State in the diagonalizing variables (u, w) with
/// w = v - (b/(d-a))(Lambda/mu - u).
struct TransformedState {
    double t = 0.0;
    Field u;
    Field w;
};

}  // namespace epidiffuse
