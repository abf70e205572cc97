#pragma once

#include "epidiffuse/common.hpp"

#include <array>
#include <utility>

namespace epidiffuse {

/// Uniform cell-centered grid on an interval (dim 1) or axis-aligned
/// rectangle (dim 2). Cell centers sit at (i + 1/2) * h per axis.
struct Grid {
    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};  // physical lengths per axis
    std::array<int, 2> cells{3, 1};          // cells per axis (y unused in 1D)
    std::array<double, 2> h{0.0, 0.0};       // spacing per axis
    double measure = 0.0;                    // |Omega|

    static Grid line(double length, int n);
    static Grid rect(double lx, double ly, int nx, int ny);

    int total_cells() const { return cells[0] * (dim == 2 ? cells[1] : 1); }
    double cell_volume() const { return dim == 2 ? h[0] * h[1] : h[0]; }
    int index(int ix, int iy = 0) const { return ix + iy * cells[0]; }
    double x_center(int ix) const { return (ix + 0.5) * h[0]; }
    double y_center(int iy) const { return (iy + 0.5) * h[1]; }
    double h_min() const { return dim == 2 ? std::min(h[0], h[1]) : h[0]; }

    bool operator==(const Grid&) const = default;
};

/// One scalar per cell, stored x-fastest.
struct Field {
    Grid grid;
    Array values;
};

Field constant_field(const Grid& grid, double c);

/// Second-order central-difference Laplacian with no-flux (Neumann)
/// boundaries realized by ghost-cell reflection.
Field laplacian(const Field& f);

/// Midpoint quadrature: sum of cell values times cell volume, accumulated
/// in ascending index order so results are bitwise reproducible.
double integrate(const Field& f);

std::pair<double, double> extrema(const Field& f);

bool all_finite(const Field& f);

/// Index of the first non-finite cell, or -1 if all values are finite.
long first_non_finite(const Field& f);

}  // namespace epidiffuse
